#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "gsrc/metadata.hpp"
#include "gsrc/shard.hpp"

using namespace gsrc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gsrc_fmt_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("metadata serialize-parse-serialize is byte-identical") {
    GeneralizedCode code = construct_code(CodeParams{5, 3, 4, 4, 7}, std::nullopt,
                                          VerifyLevel::exhaustive());
    CodeMetadata meta{code, 12345, 99};
    std::string text = metadata_to_string(meta);
    CodeMetadata parsed = metadata_from_string(text);
    CHECK(metadata_to_string(parsed) == text);
    CHECK(parsed.original_length == 12345);
    CHECK(parsed.stripe_count == 99);

    CodeMetadata bare{code, std::nullopt, std::nullopt};
    std::string bare_text = metadata_to_string(bare);
    CHECK(metadata_to_string(metadata_from_string(bare_text)) == bare_text);
}

TEST_CASE("a loaded code encodes and repairs exactly like the original") {
    GeneralizedCode code = construct_code(CodeParams{6, 4, 4, 8, 3}, std::nullopt,
                                          VerifyLevel::exhaustive());
    CodeMetadata loaded = metadata_from_string(metadata_to_string({code, {}, {}}));

    std::mt19937_64 rng(1);
    Stripe s(4, 4);
    for (auto& v : s.symbols) v = static_cast<FieldElem>(rng() % 256);
    CHECK(encode(code, s) == encode(loaded.code, s));
    CHECK(loaded.code.partitions == code.partitions);
    CHECK(loaded.code.pattern == code.pattern);
    CHECK(loaded.code.coeffs == code.coeffs);
}

TEST_CASE("metadata rejects tampered documents") {
    GeneralizedCode code = construct_code(CodeParams{5, 3, 4, 4, 7}, std::nullopt,
                                          VerifyLevel::exhaustive());
    std::string text = metadata_to_string({code, {}, {}});
    CHECK_THROWS_AS(metadata_from_string("not json"), IoError);
    std::string bad = text;
    bad.replace(bad.find("gsrc-metadata"), 13, "something-else");
    CHECK_THROWS_AS(metadata_from_string(bad), IoError);
}

TEST_CASE("shard packing vectors") {
    // w=4: high nibble first, per-stripe rounding pads the odd tail.
    auto b4 = pack_shard_symbols(4, 3, {0xA, 0xB, 0xC});
    CHECK(b4 == std::vector<std::uint8_t>{0xAB, 0xC0});
    CHECK(unpack_shard_symbols(4, 3, b4, 1) == std::vector<FieldElem>{0xA, 0xB, 0xC});

    // w=16: big-endian byte pairs.
    auto b16 = pack_shard_symbols(16, 1, {0x1234});
    CHECK(b16 == std::vector<std::uint8_t>{0x12, 0x34});
    CHECK(unpack_shard_symbols(16, 1, b16, 1) == std::vector<FieldElem>{0x1234});

    CHECK(shard_stripe_bytes(4, 3) == 2);
    CHECK(shard_stripe_bytes(8, 3) == 3);
    CHECK(shard_stripe_bytes(16, 3) == 6);
}

TEST_CASE("data mapping is little-endian within symbols") {
    CHECK(bytes_to_symbols(4, {0xAB}) == std::vector<FieldElem>{0xB, 0xA});
    CHECK(bytes_to_symbols(16, {0x34, 0x12}) == std::vector<FieldElem>{0x1234});
    CHECK(symbols_to_bytes(4, {0xB, 0xA}) == std::vector<std::uint8_t>{0xAB});
    CHECK(symbols_to_bytes(16, {0x1234}) == std::vector<std::uint8_t>{0x34, 0x12});

    // Round trip through stripes with padding and unpadding.
    std::mt19937_64 rng(2);
    for (unsigned w : {4u, 8u, 16u}) {
        std::vector<std::uint8_t> data(333);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng());
        auto stripes = file_to_stripes(w, 3, 5, data);
        CHECK(stripes_to_file(w, stripes, data.size()) == data);
    }
}

TEST_CASE("shard files round-trip and validate") {
    TempDir tmp;
    std::mt19937_64 rng(3);
    ShardHeader h{16, 14, 10, 64, 7, 5, 0};
    std::vector<FieldElem> symbols(5 * 64);
    for (auto& v : symbols) v = static_cast<FieldElem>(rng());

    std::string path = tmp.file(shard_filename(7));
    write_shard(path, h, symbols);

    auto [rh, rsymbols] = read_shard(path);
    CHECK(rh.node_index == 7);
    CHECK(rh.stripe_count == 5);
    CHECK(rh.matches(CodeParams{14, 10, 64, 16, 0}));
    CHECK_FALSE(rh.matches(CodeParams{14, 10, 32, 16, 0}));
    CHECK(rsymbols == symbols);

    ShardHeader only_header = read_shard_header(path);
    CHECK(only_header.alpha == 64);

    // Corrupt the magic: rejected.
    auto bytes = read_file(path);
    bytes[0] = 'X';
    write_file(path, bytes);
    CHECK_THROWS_AS(read_shard(path), IoError);
    CHECK_THROWS_AS(read_shard("/nonexistent/gsrc-shard"), IoError);
}

TEST_CASE("non-default polynomial survives the metadata round trip") {
    GeneralizedCode code = construct_code(CodeParams{5, 3, 4, 4, 5}, 0x3,  // x^4 + x + 1
                                          VerifyLevel::exhaustive());
    CHECK(code.field->poly() == 0x3);
    CodeMetadata loaded = metadata_from_string(metadata_to_string({code, {}, {}}));
    CHECK(loaded.code.field->poly() == 0x3);
    CHECK(loaded.code.coeffs == code.coeffs);
}

TEST_CASE("fuzzed file round trip: encode, drop up to r shards, reconstruct") {
    std::mt19937_64 rng(77);
    GeneralizedCode code = construct_code(CodeParams{6, 4, 4, 8, 11}, std::nullopt,
                                          VerifyLevel::exhaustive());
    const CodeParams& p = code.params;
    for (std::size_t len : {0u, 1u, 15u, 16u, 257u, 4096u}) {
        std::vector<std::uint8_t> data(len);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng());
        auto stripes = file_to_stripes(p.w, p.k, p.alpha, data);

        // Keep a random k-subset of nodes.
        std::vector<unsigned> nodes;
        for (unsigned node = 1; node <= p.n; ++node) nodes.push_back(node);
        for (unsigned i = 0; i < p.k; ++i)
            std::swap(nodes[i], nodes[i + rng() % (p.n - i)]);
        nodes.resize(p.k);
        std::sort(nodes.begin(), nodes.end());

        std::vector<std::vector<std::vector<FieldElem>>> shard_data(p.k);
        for (const Stripe& s : stripes) {
            CodedStripe cs = encode(code, s);
            for (std::size_t x = 0; x < nodes.size(); ++x)
                shard_data[x].push_back(cs.node_symbols(nodes[x]));
        }
        auto restored = reconstruct_stripes(code, nodes, shard_data);
        CHECK(stripes_to_file(p.w, restored, len) == data);
    }
}

TEST_CASE("odd alpha nibble packing keeps stripes independent") {
    // Two stripes of 3 nibbles each must occupy 2 bytes per stripe.
    std::vector<FieldElem> symbols = {0x1, 0x2, 0x3, 0x4, 0x5, 0x6};
    auto packed = pack_shard_symbols(4, 3, symbols);
    CHECK(packed == std::vector<std::uint8_t>{0x12, 0x30, 0x45, 0x60});
    CHECK(unpack_shard_symbols(4, 3, packed, 2) == symbols);
}
