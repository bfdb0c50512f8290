// Shard files and the byte <-> symbol data mapping.
//
// Shard layout (all header integers little-endian):
//   magic "GSRC" | u32 version=1 | u32 w | u32 n | u32 k | u32 alpha |
//   u32 node_index | u64 stripe_count | u64 payload_byte_length | payload
// Payload is stripe-major: each stripe contributes the node's alpha symbols,
// packed per width (w=4: two symbols per byte, high nibble first, per-stripe
// rounding; w=8: one byte; w=16: big-endian byte pair).
//
// Ingestion of user data maps file bytes to symbols little-endian within
// each symbol (w=4: low nibble first; w=16: low byte first), independent of
// the shard packing above.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsrc/codec.hpp"

namespace gsrc {

struct ShardHeader {
    unsigned w = 0;
    unsigned n = 0;
    unsigned k = 0;
    unsigned alpha = 0;
    unsigned node_index = 0;  // 1..n
    std::uint64_t stripe_count = 0;
    std::uint64_t payload_bytes = 0;

    bool matches(const CodeParams& p) const {
        return w == p.w && n == p.n && k == p.k && alpha == p.alpha;
    }
};

// Packed payload bytes of one stripe's worth of node symbols.
std::size_t shard_stripe_bytes(unsigned w, unsigned alpha);

// Shard payload packing (per-stripe symbol blocks).
std::vector<std::uint8_t> pack_shard_symbols(unsigned w, unsigned alpha,
                                             const std::vector<FieldElem>& symbols);
std::vector<FieldElem> unpack_shard_symbols(unsigned w, unsigned alpha,
                                            const std::vector<std::uint8_t>& bytes,
                                            std::uint64_t stripe_count);

void write_shard(const std::string& path, const ShardHeader& header,
                 const std::vector<FieldElem>& symbols);
std::pair<ShardHeader, std::vector<FieldElem>> read_shard(const std::string& path);
ShardHeader read_shard_header(const std::string& path);

// User-data mapping: little-endian within each symbol.
std::vector<FieldElem> bytes_to_symbols(unsigned w, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> symbols_to_bytes(unsigned w, const std::vector<FieldElem>& symbols);

// Chunks a file's symbol stream into stripes of k*alpha symbols, zero-padding
// the tail.
std::vector<Stripe> file_to_stripes(unsigned w, unsigned k, unsigned alpha,
                                    const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> stripes_to_file(unsigned w, const std::vector<Stripe>& stripes,
                                          std::uint64_t original_length);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

// shard_007.gsrc and friends.
std::string shard_filename(unsigned node_index);

}  // namespace gsrc
