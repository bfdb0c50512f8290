#include "gsrc/shard.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace gsrc {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'R', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}
std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

constexpr std::size_t kHeaderBytes = 4 + 6 * 4 + 2 * 8;

}  // namespace

std::size_t shard_stripe_bytes(unsigned w, unsigned alpha) {
    if (w == 4) return (alpha + 1) / 2;
    return std::size_t(alpha) * (w / 8);
}

std::vector<std::uint8_t> pack_shard_symbols(unsigned w, unsigned alpha,
                                             const std::vector<FieldElem>& symbols) {
    if (w != 4 && w != 8 && w != 16) throw Error("shard packing supports w in {4,8,16}");
    if (alpha == 0 || symbols.size() % alpha != 0) throw Error("symbol count not stripe-aligned");
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() / alpha * shard_stripe_bytes(w, alpha));
    for (std::size_t base = 0; base < symbols.size(); base += alpha) {
        if (w == 4) {
            for (unsigned i = 0; i < alpha; i += 2) {
                std::uint8_t b = static_cast<std::uint8_t>((symbols[base + i] & 0xF) << 4);
                if (i + 1 < alpha) b |= symbols[base + i + 1] & 0xF;
                out.push_back(b);
            }
        } else if (w == 8) {
            for (unsigned i = 0; i < alpha; ++i)
                out.push_back(static_cast<std::uint8_t>(symbols[base + i]));
        } else {
            for (unsigned i = 0; i < alpha; ++i) {
                out.push_back(static_cast<std::uint8_t>(symbols[base + i] >> 8));
                out.push_back(static_cast<std::uint8_t>(symbols[base + i]));
            }
        }
    }
    return out;
}

std::vector<FieldElem> unpack_shard_symbols(unsigned w, unsigned alpha,
                                            const std::vector<std::uint8_t>& bytes,
                                            std::uint64_t stripe_count) {
    const std::size_t per_stripe = shard_stripe_bytes(w, alpha);
    if (bytes.size() != per_stripe * stripe_count) throw Error("shard payload length mismatch");
    std::vector<FieldElem> out;
    out.reserve(stripe_count * alpha);
    for (std::uint64_t s = 0; s < stripe_count; ++s) {
        const std::uint8_t* p = bytes.data() + s * per_stripe;
        if (w == 4) {
            for (unsigned i = 0; i < alpha; ++i) {
                std::uint8_t b = p[i / 2];
                out.push_back(i % 2 == 0 ? (b >> 4) : (b & 0xF));
            }
        } else if (w == 8) {
            for (unsigned i = 0; i < alpha; ++i) out.push_back(p[i]);
        } else {
            for (unsigned i = 0; i < alpha; ++i)
                out.push_back(static_cast<FieldElem>((p[2 * i] << 8) | p[2 * i + 1]));
        }
    }
    return out;
}

void write_shard(const std::string& path, const ShardHeader& header,
                 const std::vector<FieldElem>& symbols) {
    std::vector<std::uint8_t> payload = pack_shard_symbols(header.w, header.alpha, symbols);
    if (symbols.size() != std::size_t(header.stripe_count) * header.alpha)
        throw Error("shard symbol count does not match stripe_count");

    std::vector<std::uint8_t> bytes;
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    put_u32(bytes, kVersion);
    put_u32(bytes, header.w);
    put_u32(bytes, header.n);
    put_u32(bytes, header.k);
    put_u32(bytes, header.alpha);
    put_u32(bytes, header.node_index);
    put_u64(bytes, header.stripe_count);
    put_u64(bytes, payload.size());
    bytes.insert(bytes.end(), payload.begin(), payload.end());
    write_file(path, bytes);
}

namespace {

ShardHeader parse_header(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw IoError("not a shard file: " + path);
    if (get_u32(bytes.data() + 4) != kVersion)
        throw IoError("unsupported shard version in " + path);
    ShardHeader h;
    h.w = get_u32(bytes.data() + 8);
    h.n = get_u32(bytes.data() + 12);
    h.k = get_u32(bytes.data() + 16);
    h.alpha = get_u32(bytes.data() + 20);
    h.node_index = get_u32(bytes.data() + 24);
    h.stripe_count = get_u64(bytes.data() + 28);
    h.payload_bytes = get_u64(bytes.data() + 36);
    if (h.payload_bytes != h.stripe_count * shard_stripe_bytes(h.w, h.alpha))
        throw IoError("corrupt shard header (payload length) in " + path);
    return h;
}

}  // namespace

std::pair<ShardHeader, std::vector<FieldElem>> read_shard(const std::string& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    ShardHeader h = parse_header(bytes, path);
    if (bytes.size() != kHeaderBytes + h.payload_bytes)
        throw IoError("truncated shard file: " + path);
    std::vector<std::uint8_t> payload(bytes.begin() + kHeaderBytes, bytes.end());
    return {h, unpack_shard_symbols(h.w, h.alpha, payload, h.stripe_count)};
}

ShardHeader read_shard_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open shard: " + path);
    std::vector<std::uint8_t> bytes(kHeaderBytes);
    in.read(reinterpret_cast<char*>(bytes.data()), kHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes))
        throw IoError("truncated shard header: " + path);
    return parse_header(bytes, path);
}

std::vector<FieldElem> bytes_to_symbols(unsigned w, const std::vector<std::uint8_t>& bytes) {
    std::vector<FieldElem> out;
    if (w == 4) {
        out.reserve(bytes.size() * 2);
        for (std::uint8_t b : bytes) {
            out.push_back(b & 0xF);  // low nibble first
            out.push_back(b >> 4);
        }
    } else if (w == 8) {
        out.assign(bytes.begin(), bytes.end());
    } else if (w == 16) {
        out.reserve((bytes.size() + 1) / 2);
        for (std::size_t i = 0; i < bytes.size(); i += 2) {
            FieldElem v = bytes[i];
            if (i + 1 < bytes.size()) v |= static_cast<FieldElem>(bytes[i + 1]) << 8;
            out.push_back(v);  // low byte first
        }
    } else {
        throw Error("data mapping supports w in {4,8,16}");
    }
    return out;
}

std::vector<std::uint8_t> symbols_to_bytes(unsigned w, const std::vector<FieldElem>& symbols) {
    std::vector<std::uint8_t> out;
    if (w == 4) {
        out.reserve((symbols.size() + 1) / 2);
        for (std::size_t i = 0; i < symbols.size(); i += 2) {
            std::uint8_t b = symbols[i] & 0xF;
            if (i + 1 < symbols.size()) b |= (symbols[i + 1] & 0xF) << 4;
            out.push_back(b);
        }
    } else if (w == 8) {
        for (FieldElem s : symbols) out.push_back(static_cast<std::uint8_t>(s));
    } else if (w == 16) {
        for (FieldElem s : symbols) {
            out.push_back(static_cast<std::uint8_t>(s));
            out.push_back(static_cast<std::uint8_t>(s >> 8));
        }
    } else {
        throw Error("data mapping supports w in {4,8,16}");
    }
    return out;
}

std::vector<Stripe> file_to_stripes(unsigned w, unsigned k, unsigned alpha,
                                    const std::vector<std::uint8_t>& bytes) {
    std::vector<FieldElem> symbols = bytes_to_symbols(w, bytes);
    const std::size_t per_stripe = std::size_t(k) * alpha;
    const std::size_t stripes = (symbols.size() + per_stripe - 1) / per_stripe;
    symbols.resize(stripes * per_stripe, 0);

    std::vector<Stripe> out;
    out.reserve(stripes);
    for (std::size_t s = 0; s < stripes; ++s) {
        Stripe st(k, alpha);
        std::copy(symbols.begin() + s * per_stripe, symbols.begin() + (s + 1) * per_stripe,
                  st.symbols.begin());
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<std::uint8_t> stripes_to_file(unsigned w, const std::vector<Stripe>& stripes,
                                          std::uint64_t original_length) {
    std::vector<FieldElem> symbols;
    for (const Stripe& s : stripes)
        symbols.insert(symbols.end(), s.symbols.begin(), s.symbols.end());
    std::vector<std::uint8_t> bytes = symbols_to_bytes(w, symbols);
    if (bytes.size() < original_length)
        throw Error("decoded data shorter than the recorded length");
    bytes.resize(original_length);
    return bytes;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) throw IoError("write failed: " + path);
}

std::string shard_filename(unsigned node_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "shard_%03u.gsrc", node_index);
    return buf;
}

}  // namespace gsrc
