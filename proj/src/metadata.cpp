#include "gsrc/metadata.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gsrc {

using nlohmann::json;

std::string metadata_to_string(const CodeMetadata& meta) {
    const GeneralizedCode& code = meta.code;
    json j;
    j["format"] = {{"name", "gsrc-metadata"}, {"version", 1}};
    j["params"] = {{"n", code.params.n},         {"k", code.params.k},
                   {"r", code.params.r()},       {"alpha", code.params.alpha},
                   {"w", code.params.w},         {"seed", code.params.seed}};
    j["field"] = {{"w", code.field->w()}, {"poly", code.field->poly()}};
    j["data_mapping"] = {{"symbol_order", "little-endian"}, {"stripe_order", "node-major"}};

    j["groups"] = code.groups.groups;

    json parts = json::array();
    for (const auto& p : code.partitions)
        parts.push_back({{"node", p.node}, {"subsets", p.subsets}, {"rho", p.rho}});
    j["partitions"] = parts;

    json arrays = json::array();
    for (const auto& arr : code.pattern.arrays) {
        json rows = json::array();
        for (unsigned i = 1; i <= arr.rows; ++i) {
            json row = json::array();
            for (unsigned c = 1; c <= arr.cols; ++c) {
                const IndexPair& cell = arr.at(i, c);
                row.push_back({cell.row, cell.node});
            }
            rows.push_back(std::move(row));
        }
        arrays.push_back(std::move(rows));
    }
    j["arrays"] = arrays;
    j["coefficients"] = code.coeffs.rows;

    j["verification"] = {{"exhaustive", code.verification.exhaustive},
                         {"subsets_checked", code.verification.subsets_checked},
                         {"pass", code.verification.pass()}};

    json data = json::object();
    if (meta.original_length) data["original_length"] = *meta.original_length;
    if (meta.stripe_count) data["stripe_count"] = *meta.stripe_count;
    j["data"] = data;

    return j.dump(2) + "\n";
}

CodeMetadata metadata_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("metadata parse error: ") + e.what());
    }
    try {
        if (j.at("format").at("name") != "gsrc-metadata" || j.at("format").at("version") != 1)
            throw IoError("unrecognized metadata format");

        CodeMetadata meta;
        GeneralizedCode& code = meta.code;
        const json& p = j.at("params");
        code.params = CodeParams{p.at("n"), p.at("k"), p.at("alpha"), p.at("w"), p.at("seed")};
        code.params.validate();
        if (p.at("r") != code.params.r()) throw IoError("inconsistent r in metadata");

        code.field = std::make_shared<Field>(j.at("field").at("w").get<unsigned>(),
                                             j.at("field").at("poly").get<unsigned>());

        code.groups.groups = j.at("groups").get<std::vector<std::vector<unsigned>>>();

        for (const json& pj : j.at("partitions")) {
            Partitioning part;
            part.node = pj.at("node");
            part.subsets = pj.at("subsets").get<std::vector<std::vector<unsigned>>>();
            part.rho = pj.at("rho");
            code.partitions.push_back(std::move(part));
        }

        code.pattern.k = code.params.k;
        code.pattern.alpha = code.params.alpha;
        code.pattern.extra_cols = code.params.group_count();
        for (const json& aj : j.at("arrays")) {
            std::size_t rows = aj.size();
            std::size_t cols = rows ? aj.at(0).size() : 0;
            IndexArray arr(rows, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                const json& rj = aj.at(i);
                if (rj.size() != cols) throw IoError("ragged index array in metadata");
                for (std::size_t c = 0; c < cols; ++c)
                    arr.cells[i * cols + c] = IndexPair{rj.at(c).at(0), rj.at(c).at(1)};
            }
            code.pattern.arrays.push_back(std::move(arr));
        }
        if (code.pattern.arrays.size() != code.params.r())
            throw IoError("metadata array count does not match r");

        code.coeffs.rows =
            j.at("coefficients").get<std::vector<std::vector<std::vector<FieldElem>>>>();

        const json& v = j.at("verification");
        code.verification.exhaustive = v.at("exhaustive");
        code.verification.subsets_checked = v.at("subsets_checked");
        if (!v.at("pass").get<bool>()) throw IoError("metadata records a failed verification");

        const json& data = j.at("data");
        if (data.contains("original_length"))
            meta.original_length = data.at("original_length").get<std::uint64_t>();
        if (data.contains("stripe_count"))
            meta.stripe_count = data.at("stripe_count").get<std::uint64_t>();
        return meta;
    } catch (const json::exception& e) {
        throw IoError(std::string("metadata field error: ") + e.what());
    }
}

void save_metadata(const CodeMetadata& meta, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << metadata_to_string(meta);
    if (!out.good()) throw IoError("write failed: " + path);
}

CodeMetadata load_metadata(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open metadata: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return metadata_from_string(ss.str());
}

}  // namespace gsrc
