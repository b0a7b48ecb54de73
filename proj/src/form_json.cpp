#include "ehk/form_json.hpp"

#include <fstream>
#include <sstream>

namespace ehk {

using nlohmann::json;

json form_to_json(const KForm& f) {
    json j;
    j["dim"] = f.dim();
    j["degree"] = f.degree();
    json terms = json::array();
    // terms sorted lexicographically by the ascending label sequence
    std::vector<std::pair<std::vector<int>, double>> rows;
    const int base = axis_label_base(f.dim());
    for (auto& [m, c] : f.terms()) {
        std::vector<int> labels;
        for (int b : maskops::bits(m)) labels.push_back(b + base);
        rows.emplace_back(std::move(labels), c);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [labels, c] : rows) terms.push_back(json{{"idx", labels}, {"c", c}});
    j["terms"] = std::move(terms);
    return j;
}

KForm form_from_json(const json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const int degree = j.at("degree").get<int>();
        KForm f(dim, degree);
        const int base = axis_label_base(dim);
        for (const auto& t : j.at("terms")) {
            auto idx = t.at("idx").get<std::vector<int>>();
            if (static_cast<int>(idx.size()) != degree)
                throw ParseError("form_from_json: index arity does not match the degree");
            Mask m = 0;
            int prev = -1;
            for (int label : idx) {
                if (label <= prev) throw ParseError("form_from_json: idx must be strictly increasing");
                prev = label;
                const int bit = label - base;
                if (bit < 0 || bit >= dim) throw ParseError("form_from_json: label out of range");
                m |= static_cast<Mask>(1u << bit);
            }
            f.add(m, t.at("c").get<double>());
        }
        return f;
    } catch (const json::exception& e) {
        throw ParseError(std::string("form_from_json: ") + e.what());
    } catch (const Error&) {
        throw;
    }
}

namespace {

json metric_block(const Metric& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i)
        for (int j2 = 0; j2 < m.dim(); ++j2) rows.push_back(m.g()(i, j2));
    return rows;
}

Metric metric_from_block(const json& j, int dim, int orientation) {
    auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != dim * dim) throw ParseError("structure: metric block size mismatch");
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j2 = 0; j2 < dim; ++j2) g(i, j2) = v[i * dim + j2];
    return Metric(g, orientation);
}

}  // namespace

json structure_to_json(const G2Structure& S) {
    json j = form_to_json(S.phi());
    j["metric"] = metric_block(S.metric());
    j["orientation"] = S.orientation();
    return j;
}

json structure_to_json(const Spin7Structure& S) {
    json j = form_to_json(S.Phi());
    j["metric"] = metric_block(S.metric());
    j["orientation"] = S.orientation();
    return j;
}

ParsedStructure structure_from_json(const json& j) {
    KForm f = form_from_json(j);
    ParsedStructure out;
    try {
        if (f.dim() == 7 && f.degree() == 3) {
            if (j.contains("metric")) {
                Metric m = metric_from_block(j.at("metric"), 7, j.value("orientation", 1));
                out.g2 = G2Structure(f, m);
            } else {
                out.g2 = G2Structure(f);
            }
        } else if (f.dim() == 8 && f.degree() == 4) {
            if (j.contains("metric")) {
                Metric m = metric_from_block(j.at("metric"), 8, j.value("orientation", 1));
                out.spin7 = Spin7Structure(f, m);
            } else {
                out.spin7 = Spin7Structure(f);
            }
        } else {
            throw ParseError("structure_from_json: need a 3-form on R^7 or a 4-form on R^8");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("structure_from_json: ") + e.what());
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("parse error in ") + path + ": " + e.what());
    }
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ehk
