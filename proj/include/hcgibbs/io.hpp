#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hcgibbs/activities.hpp"
#include "hcgibbs/boundary.hpp"
#include "hcgibbs/chain.hpp"
#include "hcgibbs/phase.hpp"
#include "hcgibbs/simulate.hpp"

namespace hcgibbs::io {

/// Malformed input file or document; message carries "line L, column C" where known.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ActivitySpec parse_activity_spec(const nlohmann::json& doc);
ActivitySpec parse_activity_text(const std::string& text, const std::string& source = "<input>");
ActivitySpec load_activity_spec(const std::string& path);

nlohmann::json to_json(const ActivitySpec& spec);
nlohmann::json to_json(const SeriesSum& s);
nlohmann::json to_json(const PhaseReport& report);

/// {"parity": "even", "freq": {"0": 0.71, "1": 0.02, ...}}
nlohmann::json occupation_json(Parity parity, const std::map<long, double>& freq);

/// `index,value` rows over [-N, N].
void write_indexed_csv(std::ostream& os, const Eigen::VectorXd& values, long truncation);

/// Header plus `level,index,spin` rows.
void write_sample_csv(std::ostream& os, const TreeSample& sample);

/// Headerless `id,level,index,spin` rows, for streaming several samples.
void write_sample_rows(std::ostream& os, const TreeSample& sample, std::uint64_t id);

}  // namespace hcgibbs::io
