#pragma once
// Model, data and gadget files; versioned JSON reports.

#include "rptf/attack.hpp"
#include "rptf/hardness.hpp"
#include "rptf/learner.hpp"
#include "rptf/neural.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace rptf::io {

using json = nlohmann::ordered_json;

/// Rounds to the given number of significant digits (non-finite values pass through).
double round_sig(double v, int digits = 12);
/// Recursively rounds every floating-point number.
json rounded(const json& j, int digits = 12);
/// Two-space indented text with a trailing newline.
std::string dump(const json& j);

json read_json_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename, so a failed run leaves no partial output.
void write_text_file(const std::filesystem::path& path, const std::string& text);

json vector_json(const Vector& v);
json matrix_json(const Matrix& M);
Vector vector_from_json(const json& j, const char* what);
Matrix matrix_from_json(const json& j, const char* what);

/// {"n", "A", "b", "c"}; A may be omitted for linear models.
json poly_to_json(const QuadPoly& g);
QuadPoly poly_from_json(const json& j);

/// {"W", "V", "v_prime"}; V may be a flat array for a binary net.
json net_to_json(const TwoLayerNet& net);
TwoLayerNet net_from_json(const json& j);

/// Header line required; columns x_1..x_n then a label in {-1, 1}.
LabeledSet read_csv(std::istream& in);
LabeledSet read_csv_file(const std::filesystem::path& path);
void write_csv(std::ostream& out, const LabeledSet& S);
std::string csv_string(const LabeledSet& S);

json outcome_json(const AttackOutcome& o);
json summary_json(const BatchSummary& s);
/// schema attack-report/1
json attack_report(const BatchResult& r, const json& config);
/// schema learn-report/1; the model is embedded under "model".
json learn_report(const LearnResult& r, const json& config);
/// One JSON object per line.
std::string transcript_jsonl(const LearnResult& r);

/// schema gadget/1, full precision, data embedded as "data_csv".
json gadget_to_json(const GadgetInstance& g);
GadgetInstance gadget_from_json(const json& j);

json rank_json(const RankReport& r);
json robustness_json(const RobustnessVerdict& v);
json pair_check_json(const PairCheck& p);

}  // namespace rptf::io
