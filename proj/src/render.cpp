#include "dupeq/render.hpp"

namespace dupeq {

Json rational_json(const Rational& q) {
  return Json{{"rational", to_fraction_string(q)}, {"decimal", to_double(q)}};
}

Json bigfloat_json(const BigFloat& x) {
  return Json{{"decimal", static_cast<double>(x)},
              {"highprec", x.str(30, std::ios_base::scientific)}};
}

Json assessment_json(const CheatAssessment& a, bool include_per_m) {
  Json j;
  j["m_star"] = a.m_star;
  j["g_star"] = rational_json(a.g_star);
  j["f"] = rational_json(a.f_value);
  j["equilibrium"] = a.equilibrium();
  if (include_per_m && !a.per_m.empty()) {
    Json table = Json::array();
    for (const auto& [m, g] : a.per_m)
      table.push_back(Json{{"m", m}, {"g", rational_json(g)}});
    j["per_m"] = std::move(table);
  }
  return j;
}

Json threshold_json(const ThresholdResult& r, long L) {
  Json j;
  if (r.t_star) {
    j["t_star"] = *r.t_star;
    j["t_star_over_L"] = static_cast<double>(*r.t_star) / static_cast<double>(L);
  } else {
    j["t_star"] = nullptr;
  }
  j["method"] = r.method;
  j["hint_fallback"] = r.hint_fallback;
  j["witness_below"] =
      r.witness_below ? assessment_json(*r.witness_below) : Json(nullptr);
  j["witness_at"] = r.witness_at ? assessment_json(*r.witness_at) : Json(nullptr);
  return j;
}

Json bound_report_json(const BoundReport& r) {
  Json j;
  j["L"] = r.L;
  j["t"] = r.t;
  j["f_lb"] = bigfloat_json(r.f_lb);
  j["f_ub"] = bigfloat_json(r.f_ub);
  j["g_lb"] = bigfloat_json(r.g_lb);
  j["g_ub"] = bigfloat_json(r.g_ub);
  j["euler_gamma"] = bigfloat_json(r.euler_gamma_value);
  j["verdict"] = to_string(r.verdict);
  return j;
}

Json band_json(const ThresholdBand& band, long L) {
  Json j;
  j["L"] = L;
  j["approx_threshold"] = band.approx_threshold;
  j["headline"] = "t ~ L/5";
  // The closed forms bound the raw sums over x in [t, L]; the 1/(L-t+1)
  // normalization cancels in the cheat-vs-honest comparison.
  j["bounds_on"] = "unnormalized sums";
  j["at_cheat_point"] = bound_report_json(band.at_cheat);
  j["at_no_cheat_point"] = bound_report_json(band.at_no_cheat);
  return j;
}

Json sim_report_json(const SimReport& r) {
  Json j;
  j["estimate"] = r.estimate;
  j["stderr"] = r.stderr_;
  j["z_score"] = r.z_score;
  j["analytic"] = rational_json(r.analytic);
  j["trials"] = r.trials;
  j["wins"] = r.wins;
  j["detected"] = r.detected;
  return j;
}

namespace {

void flatten(const Json& value, const std::string& prefix, std::ostream& os) {
  if (value.is_object()) {
    for (const auto& [key, sub] : value.items())
      flatten(sub, prefix.empty() ? key : prefix + "." + key, os);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i)
      flatten(value[i], prefix + "[" + std::to_string(i) + "]", os);
  } else if (value.is_string()) {
    os << prefix << "," << value.get<std::string>() << "\n";
  } else {
    os << prefix << "," << value.dump() << "\n";
  }
}

}  // namespace

void write_kv_csv(std::ostream& os, const Json& value) {
  os << "key,value\n";
  flatten(value, "", os);
}

const char* const kSweepCsvHeader =
    "L,t_star,t_star_over_L,method,m_star,f_at_t_star,f_decimal,"
    "g_star_at_t_star,g_star_decimal";

void write_sweep_csv_row(std::ostream& os, long L, const ThresholdResult& r) {
  if (!r.t_star) {
    os << L << ",none,," << r.method << ",,,,,\n";
    return;
  }
  const CheatAssessment& w = *r.witness_at;
  os << L << "," << *r.t_star << ","
     << json_number_to_string(static_cast<double>(*r.t_star) /
                              static_cast<double>(L))
     << "," << r.method << "," << w.m_star << "," << to_fraction_string(w.f_value)
     << "," << json_number_to_string(to_double(w.f_value)) << ","
     << to_fraction_string(w.g_star) << ","
     << json_number_to_string(to_double(w.g_star)) << "\n";
}

Json sweep_row_json(long L, const ThresholdResult& r) {
  Json j;
  j["L"] = L;
  if (r.t_star) {
    j["t_star"] = *r.t_star;
    j["t_star_over_L"] = static_cast<double>(*r.t_star) / static_cast<double>(L);
    j["method"] = r.method;
    j["m_star"] = r.witness_at->m_star;
    j["f"] = rational_json(r.witness_at->f_value);
    j["g_star"] = rational_json(r.witness_at->g_star);
  } else {
    j["t_star"] = nullptr;
    j["method"] = r.method;
  }
  return j;
}

std::string json_number_to_string(double v) { return Json(v).dump(); }

}  // namespace dupeq
