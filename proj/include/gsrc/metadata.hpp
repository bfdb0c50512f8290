// Canonical on-disk description of a code instance: everything repair and
// reconstruction need beyond the shard files themselves.
#pragma once

#include <optional>
#include <string>

#include "gsrc/codec.hpp"

namespace gsrc {

struct CodeMetadata {
    GeneralizedCode code;
    // Set on the copy written next to encoded shards.
    std::optional<std::uint64_t> original_length;
    std::optional<std::uint64_t> stripe_count;
};

// Canonical JSON: sorted keys, two-space indent, integers only. Parsing and
// re-serializing is byte-identical.
std::string metadata_to_string(const CodeMetadata& meta);
CodeMetadata metadata_from_string(const std::string& text);

void save_metadata(const CodeMetadata& meta, const std::string& path);
CodeMetadata load_metadata(const std::string& path);

}  // namespace gsrc
