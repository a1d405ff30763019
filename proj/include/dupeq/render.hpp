#pragma once

#include <json.hpp>

#include <ostream>
#include <string>

#include "dupeq/approx.hpp"
#include "dupeq/engine.hpp"
#include "dupeq/simulate.hpp"

namespace dupeq {

// Insertion-ordered JSON so output bytes are stable across runs.
using Json = nlohmann::ordered_json;

// Exact quantities carry both the lossless "p/q" form and a decimal
// rendering, so downstream tooling never has to parse fractions.
Json rational_json(const Rational& q);
Json bigfloat_json(const BigFloat& x);

Json assessment_json(const CheatAssessment& a, bool include_per_m = false);
Json threshold_json(const ThresholdResult& r, long L);
Json bound_report_json(const BoundReport& r);
Json band_json(const ThresholdBand& band, long L);
Json sim_report_json(const SimReport& r);

// Flattens a result object into "key,value" CSV rows (dotted paths).
void write_kv_csv(std::ostream& os, const Json& value);

// One sweep row per L; fixed, documented column set.
extern const char* const kSweepCsvHeader;
void write_sweep_csv_row(std::ostream& os, long L, const ThresholdResult& r);
Json sweep_row_json(long L, const ThresholdResult& r);

std::string json_number_to_string(double v);

}  // namespace dupeq
