// gsrc command line: construct | encode | repair | reconstruct | bench.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsrc/bench.hpp"
#include "gsrc/metadata.hpp"
#include "gsrc/repair.hpp"
#include "gsrc/shard.hpp"

namespace fs = std::filesystem;
using namespace gsrc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConstruction = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

VerifyLevel parse_verify(const std::string& text) {
    if (text == "auto" || text.empty()) return {};
    if (text == "exhaustive") return VerifyLevel::exhaustive();
    if (text.rfind("sampled:", 0) == 0) {
        unsigned n = static_cast<unsigned>(std::stoul(text.substr(8)));
        return VerifyLevel::sampled(n);
    }
    throw UsageError("bad --verify value: " + text + " (auto | exhaustive | sampled:N)");
}

void check_supported_width(unsigned w) {
    if (w != 4 && w != 8 && w != 16)
        throw UsageError("supported field widths: 4, 8, 16");
}

std::string gamma_line(const RepairTrace& t) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "gamma %s (= %.6g), bounds [%s, %s]", t.gamma.str().c_str(),
                  t.gamma.to_double(), t.lower_bound.str().c_str(),
                  t.upper_bound.str().c_str());
    return buf;
}

// node -> shard path for every shard file in dir.
std::map<unsigned, std::string> scan_shards(const std::string& dir, const CodeParams& params) {
    std::map<unsigned, std::string> found;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".gsrc") continue;
        ShardHeader h;
        try {
            h = read_shard_header(entry.path().string());
        } catch (const IoError&) {
            continue;  // unrelated file
        }
        if (!h.matches(params))
            throw IoError("shard " + entry.path().string() +
                          " belongs to a different code (n/k/alpha/w mismatch)");
        found[h.node_index] = entry.path().string();
    }
    return found;
}

// Per-stripe symbol slices of one shard.
std::vector<std::vector<FieldElem>> shard_stripe_slices(const std::vector<FieldElem>& symbols,
                                                        unsigned alpha) {
    std::vector<std::vector<FieldElem>> out;
    out.reserve(symbols.size() / alpha);
    for (std::size_t base = 0; base < symbols.size(); base += alpha)
        out.emplace_back(symbols.begin() + base, symbols.begin() + base + alpha);
    return out;
}

int cmd_construct(unsigned n, unsigned k, unsigned alpha, unsigned w, std::uint64_t seed,
                  std::optional<unsigned> poly, const std::string& verify,
                  const std::string& out_path) {
    check_supported_width(w);
    CodeParams params{n, k, alpha, w, seed};
    params.validate();
    if (poly && !is_irreducible(w, *poly))
        throw UsageError("polynomial is reducible for w=" + std::to_string(w));

    std::uint64_t bound = mds_field_bound(params);
    if ((std::uint64_t(1) << w) < bound)
        std::cerr << "warning: field size 2^" << w << " is below the sufficient bound "
                  << bound << "; relying on a-posteriori verification\n";

    GeneralizedCode code = construct_code(params, poly, parse_verify(verify));
    save_metadata({code, std::nullopt, std::nullopt}, out_path);
    std::cout << "constructed (" << n << "," << k << "," << n - 1 << ") alpha=" << alpha
              << " over GF(2^" << w << "), verification "
              << (code.verification.exhaustive ? "exhaustive" : "sampled") << " over "
              << code.verification.subsets_checked << " subsets: pass\n"
              << "metadata: " << out_path << "\n";
    return kExitOk;
}

int cmd_encode(const std::string& meta_path, const std::string& input,
               const std::string& out_dir) {
    CodeMetadata meta = load_metadata(meta_path);
    const CodeParams& p = meta.code.params;

    std::vector<std::uint8_t> data = read_file(input);
    std::vector<Stripe> stripes = file_to_stripes(p.w, p.k, p.alpha, data);

    fs::create_directories(out_dir);
    // stripe-major symbol streams per node
    std::vector<std::vector<FieldElem>> node_streams(p.n + 1);
    for (const Stripe& s : stripes) {
        CodedStripe cs = encode(meta.code, s);
        for (unsigned node = 1; node <= p.n; ++node) {
            auto symbols = cs.node_symbols(node);
            node_streams[node].insert(node_streams[node].end(), symbols.begin(), symbols.end());
        }
    }
    for (unsigned node = 1; node <= p.n; ++node) {
        ShardHeader h{p.w, p.n, p.k, p.alpha, node,
                      stripes.size(), 0 /* filled on write */};
        write_shard((fs::path(out_dir) / shard_filename(node)).string(), h, node_streams[node]);
    }
    meta.original_length = data.size();
    meta.stripe_count = stripes.size();
    save_metadata(meta, (fs::path(out_dir) / "metadata.json").string());

    std::cout << "encoded " << data.size() << " bytes into " << p.n << " shards x "
              << stripes.size() << " stripes under " << out_dir << "\n";
    return kExitOk;
}

int cmd_repair(const std::string& meta_path, const std::string& shard_dir, unsigned failed,
               std::string out_dir) {
    CodeMetadata meta = load_metadata(meta_path);
    const CodeParams& p = meta.code.params;
    if (failed < 1 || failed > p.n) throw UsageError("failed node out of range");
    if (failed > p.k)
        throw UsageError("node " + std::to_string(failed) +
                         " is a parity node; repair handles systematic nodes only");
    if (out_dir.empty()) out_dir = shard_dir;

    auto shard_paths = scan_shards(shard_dir, p);
    std::vector<unsigned> missing;
    for (unsigned node = 1; node <= p.n; ++node)
        if (node != failed && !shard_paths.count(node)) missing.push_back(node);
    if (!missing.empty()) {
        std::string list;
        for (unsigned m : missing) list += " " + std::to_string(m);
        throw IoError("missing shards for node(s):" + list);
    }

    RepairPlan plan = plan_repair(meta.code, failed);
    RepairTrace trace = bandwidth(plan);

    std::map<unsigned, std::vector<std::vector<FieldElem>>> stripes_by_node;
    std::uint64_t stripe_count = 0;
    for (unsigned node = 1; node <= p.n; ++node) {
        if (node == failed) continue;
        auto [h, symbols] = read_shard(shard_paths[node]);
        if (h.node_index != node) throw IoError("shard file mislabeled: " + shard_paths[node]);
        if (stripe_count == 0) stripe_count = h.stripe_count;
        if (h.stripe_count != stripe_count)
            throw IoError("inconsistent stripe counts across shards");
        stripes_by_node[node] = shard_stripe_slices(symbols, p.alpha);
    }

    std::vector<FieldElem> repaired_stream;
    repaired_stream.reserve(stripe_count * p.alpha);
    for (std::uint64_t s = 0; s < stripe_count; ++s) {
        std::map<unsigned, std::vector<FieldElem>> view;
        for (auto& [node, slices] : stripes_by_node) view[node] = slices[s];
        auto repaired = execute_repair(meta.code, plan, view);
        repaired_stream.insert(repaired_stream.end(), repaired.begin(), repaired.end());
    }

    ShardHeader h{p.w, p.n, p.k, p.alpha, failed, stripe_count, 0};
    std::string out_path = (fs::path(out_dir) / shard_filename(failed)).string();
    write_shard(out_path, h, repaired_stream);

    std::cout << "repaired node " << failed << ": " << trace.accessed
              << " symbols/stripe accessed, " << trace.transferred << " transferred, "
              << gamma_line(trace) << "\n"
              << "stripes: " << stripe_count << ", shard: " << out_path << "\n";
    if (trace.gamma == trace.lower_bound) std::cout << "gamma equals the lower bound\n";
    return kExitOk;
}

int cmd_reconstruct(const std::string& meta_path, const std::string& shard_dir,
                    const std::string& out_path) {
    CodeMetadata meta = load_metadata(meta_path);
    const CodeParams& p = meta.code.params;
    if (!meta.original_length)
        throw IoError("metadata lacks data.original_length; pass the copy written beside "
                      "the shards");

    auto shard_paths = scan_shards(shard_dir, p);
    if (shard_paths.size() < p.k)
        throw IoError("need at least k=" + std::to_string(p.k) + " shards, found " +
                      std::to_string(shard_paths.size()));

    // Deterministic pick: systematic nodes first, then parities, ascending.
    std::vector<unsigned> nodes;
    for (const auto& [node, path] : shard_paths) {
        (void)path;
        if (nodes.size() < p.k) nodes.push_back(node);
    }

    std::vector<std::vector<std::vector<FieldElem>>> data;
    std::uint64_t stripe_count = 0;
    for (unsigned node : nodes) {
        auto [h, symbols] = read_shard(shard_paths[node]);
        if (stripe_count == 0) stripe_count = h.stripe_count;
        if (h.stripe_count != stripe_count)
            throw IoError("inconsistent stripe counts across shards");
        data.push_back(shard_stripe_slices(symbols, p.alpha));
    }
    if (meta.stripe_count && *meta.stripe_count != stripe_count)
        throw IoError("shard stripe count disagrees with metadata");

    std::vector<Stripe> stripes = reconstruct_stripes(meta.code, nodes, data);
    write_file(out_path, stripes_to_file(p.w, stripes, *meta.original_length));
    std::cout << "reconstructed " << *meta.original_length << " bytes from " << p.k
              << " shards into " << out_path << "\n";
    return kExitOk;
}

int cmd_bench(unsigned n, unsigned k, const std::string& alphas_text, unsigned w,
              std::uint64_t seed, const std::string& verify, const std::string& csv_path) {
    check_supported_width(w);
    std::vector<unsigned> alphas;
    std::string token;
    for (char c : alphas_text + ",") {
        if (c == ',') {
            if (!token.empty()) alphas.push_back(static_cast<unsigned>(std::stoul(token)));
            token.clear();
        } else {
            token += c;
        }
    }
    if (alphas.empty()) throw UsageError("--alphas is empty");

    auto rows = sweep_alpha(n, k, alphas, w, seed, parse_verify(verify));
    emit_csv(rows, csv_path);
    for (const auto& row : rows) {
        if (row.ok) {
            std::printf("alpha %3u: avg gamma %s (%.6g), reduction %.6g%%\n", row.alpha,
                        row.avg_gamma.str().c_str(), row.avg_gamma.to_double(),
                        row.reduction_vs_rs.to_double() * 100);
        } else {
            std::printf("alpha %3u: failed (%s)\n", row.alpha, row.error.c_str());
        }
    }
    std::cout << "csv: " << csv_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"general sub-packetized regenerating codes"};
    app.require_subcommand(1);

    unsigned n = 0, k = 0, alpha = 0, w = 8, failed = 0;
    std::uint64_t seed = 1;
    std::string verify = "auto", meta_path, input, output, dir, alphas;
    std::optional<unsigned> poly;

    auto* construct = app.add_subcommand("construct", "build a code and write its metadata");
    construct->add_option("--n", n, "total nodes")->required();
    construct->add_option("--k", k, "systematic nodes")->required();
    construct->add_option("--alpha", alpha, "sub-packetization level")->required();
    construct->add_option("--w", w, "field width (4, 8, 16)")->required();
    construct->add_option("--seed", seed, "coefficient RNG seed");
    construct->add_option("--poly", poly, "irreducible polynomial (low bits, x^w implicit)");
    construct->add_option("--verify", verify, "auto | exhaustive | sampled:N");
    construct->add_option("--out", output, "metadata output path")->required();

    auto* encode_cmd = app.add_subcommand("encode", "encode a file into n shards");
    encode_cmd->add_option("--meta", meta_path, "metadata path")->required();
    encode_cmd->add_option("--input", input, "input file")->required();
    encode_cmd->add_option("--out-dir", dir, "shard output directory")->required();

    auto* repair_cmd = app.add_subcommand("repair", "regenerate a failed systematic shard");
    repair_cmd->add_option("--meta", meta_path, "metadata path")->required();
    repair_cmd->add_option("--shards", input, "shard directory")->required();
    repair_cmd->add_option("--failed", failed, "failed node index")->required();
    repair_cmd->add_option("--out-dir", dir, "output directory (default: shard dir)");

    auto* reconstruct_cmd =
        app.add_subcommand("reconstruct", "rebuild the original file from any k shards");
    reconstruct_cmd->add_option("--meta", meta_path, "metadata path")->required();
    reconstruct_cmd->add_option("--shards", input, "shard directory")->required();
    reconstruct_cmd->add_option("--out", output, "output file")->required();

    auto* bench_cmd = app.add_subcommand("bench", "bandwidth sweep over alpha, CSV output");
    bench_cmd->add_option("--n", n, "total nodes")->required();
    bench_cmd->add_option("--k", k, "systematic nodes")->required();
    bench_cmd->add_option("--alphas", alphas, "comma-separated alpha list")->required();
    bench_cmd->add_option("--w", w, "field width (4, 8, 16)")->required();
    bench_cmd->add_option("--seed", seed, "coefficient RNG seed");
    bench_cmd->add_option("--verify", verify, "auto | exhaustive | sampled:N");
    bench_cmd->add_option("--csv", output, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (construct->parsed())
            return cmd_construct(n, k, alpha, w, seed, poly, verify, output);
        if (encode_cmd->parsed()) return cmd_encode(meta_path, input, dir);
        if (repair_cmd->parsed()) return cmd_repair(meta_path, input, failed, dir);
        if (reconstruct_cmd->parsed()) return cmd_reconstruct(meta_path, input, output);
        if (bench_cmd->parsed()) return cmd_bench(n, k, alphas, w, seed, verify, output);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const WrongNodeCount& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoValidPartition& e) {
        std::cerr << "construction failed (partitioning): " << e.what() << "\n";
        return kExitConstruction;
    } catch (const UnsolvableSchedule& e) {
        std::cerr << "construction failed (scheduling): " << e.what() << "\n";
        return kExitConstruction;
    } catch (const BoundViolation& e) {
        std::cerr << "construction failed (bandwidth bounds): " << e.what() << "\n";
        return kExitConstruction;
    } catch (const MdsSearchExhausted& e) {
        std::cerr << "verification failed (MDS search): " << e.what() << "\n";
        return kExitVerification;
    } catch (const SingularSystem& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const MissingSymbol& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConstruction;
    }
    return kExitUsage;
}
