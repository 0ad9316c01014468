#include "hcgibbs/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "hcgibbs/errors.hpp"

namespace hcgibbs::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& doc, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : doc.items()) {
        if (!allowed.contains(key)) throw ParseError("unknown field \"" + key + "\" in activity spec");
    }
}

double number(const json& doc, const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!doc.contains(key)) {
        if (fallback) return *fallback;
        throw ParseError("missing field \"" + key + "\" in activity spec");
    }
    const json& v = doc.at(key);
    if (!v.is_number()) throw ParseError("field \"" + key + "\" must be a number");
    return v.get<double>();
}

long parse_index(const std::string& key) {
    std::size_t used = 0;
    long j = 0;
    try {
        j = std::stol(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || key.empty()) throw ParseError("explicit activity index \"" + key + "\" is not an integer");
    return j;
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ActivitySpec parse_activity_spec(const json& doc) {
    if (!doc.is_object()) throw ParseError("activity spec must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string()) throw ParseError("activity spec needs a string \"kind\"");
    const auto kind = doc.at("kind").get<std::string>();
    try {
        if (kind == "geometric") {
            reject_unknown(doc, {"kind", "alpha", "beta", "scale"});
            return ActivitySpec::geometric(number(doc, "alpha"), number(doc, "beta"), number(doc, "scale", 1.0));
        }
        if (kind == "poisson") {
            reject_unknown(doc, {"kind", "rate_pos", "rate_neg", "scale"});
            return ActivitySpec::poisson(number(doc, "rate_pos"), number(doc, "rate_neg"), number(doc, "scale", 1.0));
        }
        if (kind == "telescoping") {
            reject_unknown(doc, {"kind", "scale"});
            return ActivitySpec::telescoping(number(doc, "scale", 1.0));
        }
        if (kind == "explicit") {
            reject_unknown(doc, {"kind", "values", "divergent"});
            if (!doc.contains("values") || !doc.at("values").is_object())
                throw ParseError("explicit activity spec needs an object \"values\"");
            std::map<long, double> values;
            for (const auto& [key, v] : doc.at("values").items()) {
                if (!v.is_number()) throw ParseError("explicit activity \"" + key + "\" must be a number");
                values[parse_index(key)] = v.get<double>();
            }
            bool divergent = false;
            if (doc.contains("divergent")) {
                if (!doc.at("divergent").is_boolean()) throw ParseError("field \"divergent\" must be a boolean");
                divergent = doc.at("divergent").get<bool>();
            }
            return ActivitySpec::explicit_values(std::move(values), divergent);
        }
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid activity spec: ") + e.what());
    }
    throw ParseError("unknown activity kind \"" + kind + "\"");
}

ActivitySpec parse_activity_text(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + locate(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
    }
    try {
        return parse_activity_spec(doc);
    } catch (const ParseError& e) {
        throw ParseError(source + ": " + e.what());
    }
}

ActivitySpec load_activity_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open activity spec");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_activity_text(buf.str(), path);
}

json to_json(const ActivitySpec& spec) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GeometricParams>) {
                return {{"kind", "geometric"}, {"alpha", p.alpha}, {"beta", p.beta}, {"scale", p.scale}};
            } else if constexpr (std::is_same_v<T, PoissonParams>) {
                return {{"kind", "poisson"}, {"rate_pos", p.rate_pos}, {"rate_neg", p.rate_neg}, {"scale", p.scale}};
            } else if constexpr (std::is_same_v<T, TelescopingParams>) {
                return {{"kind", "telescoping"}, {"scale", p.scale}};
            } else {
                json values = json::object();
                for (const auto& [j, v] : p.values) values[std::to_string(j)] = v;
                json out{{"kind", "explicit"}, {"values", values}};
                if (p.divergent) out["divergent"] = true;
                return out;
            }
        },
        spec.params());
}

json to_json(const SeriesSum& s) {
    return {{"value", s.value}, {"tail_bound", s.tail_bound}, {"terms_used", s.terms_used}};
}

json to_json(const PhaseReport& r) {
    json out;
    out["k"] = r.k;
    out["Lambda"] = std::isfinite(r.Lambda) ? json(r.Lambda) : json("divergent");
    out["Lambda_cr"] = r.Lambda_cr;
    out["regime"] = to_string(r.regime);
    out["A0"] = r.A0 ? json(*r.A0) : json(nullptr);
    out["pair"] = r.pair ? json::array({r.pair->low, r.pair->high}) : json(nullptr);
    out["fixed_points"] = r.fixed_points;
    out["residuals"] = {{"A0", r.residual_A0 ? json(*r.residual_A0) : json(nullptr)},
                        {"pair", r.residual_pair ? json(*r.residual_pair) : json(nullptr)}};
    return out;
}

json occupation_json(Parity parity, const std::map<long, double>& freq) {
    json f = json::object();
    for (const auto& [s, v] : freq) f[std::to_string(s)] = v;
    return {{"parity", to_string(parity)}, {"freq", f}};
}

void write_indexed_csv(std::ostream& os, const Eigen::VectorXd& values, long truncation) {
    const auto old = os.precision(17);
    os << "index,value\n";
    for (long j = -truncation; j <= truncation; ++j) os << j << ',' << values(j + truncation) << '\n';
    os.precision(old);
}

void write_sample_csv(std::ostream& os, const TreeSample& sample) {
    os << "level,index,spin\n";
    for (std::size_t level = 0; level < sample.spins.size(); ++level) {
        const auto& row = sample.spins[level];
        for (std::size_t i = 0; i < row.size(); ++i) os << level << ',' << i << ',' << row[i] << '\n';
    }
}

void write_sample_rows(std::ostream& os, const TreeSample& sample, std::uint64_t id) {
    for (std::size_t level = 0; level < sample.spins.size(); ++level) {
        const auto& row = sample.spins[level];
        for (std::size_t i = 0; i < row.size(); ++i) os << id << ',' << level << ',' << i << ',' << row[i] << '\n';
    }
}

}  // namespace hcgibbs::io
