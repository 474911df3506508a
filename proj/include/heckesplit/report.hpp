#pragma once

// Serializable summary of a LevelVerdict, as emitted by the command-line tool.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "heckesplit/scan.hpp"

namespace heckesplit {

struct WitnessReport {
  unsigned k = 0;
  unsigned l = 0;
  std::vector<std::uint64_t> factor_coeffs;    // ascending, over F_p
  std::vector<std::uint64_t> charpoly_coeffs;  // ascending, over F_p
  friend bool operator==(const WitnessReport&, const WitnessReport&) = default;
};

struct BreakReport {
  unsigned l = 0;
  unsigned k = 0;
  std::string reason;
  friend bool operator==(const BreakReport&, const BreakReport&) = default;
};

struct ScanReport {
  unsigned level = 1;
  std::string chi = "trivial";
  std::uint64_t p = 2;
  unsigned k_max = 0;
  std::string l_policy;
  unsigned tested_k_max = 0;
  unsigned tested_l_max = 0;
  bool complete = true;
  bool all_split = true;
  std::optional<WitnessReport> witness;
  std::map<std::string, std::size_t> periods;  // "l=<l>,k0=<k0>" -> period of f_1, f_2, ...
  std::vector<BreakReport> ladder_breaks;
  long bound_m = 0;
  std::size_t assertions_checked = 0;
  std::size_t cells = 0;
  friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

inline std::string ladder_key(unsigned l, unsigned k0) { return "l=" + std::to_string(l) + ",k0=" + std::to_string(k0); }

inline ScanReport make_report(const LevelVerdict& v, const ScanOptions& options) {
  ScanReport r;
  r.level = v.level;
  r.chi = std::string(to_string(v.chi));
  r.p = v.p;
  r.k_max = v.k_max;
  if (options.fixed_ells.empty()) {
    r.l_policy = "sturm";
  } else {
    std::ostringstream s;
    for (std::size_t i = 0; i < options.fixed_ells.size(); ++i) s << (i ? "," : "") << options.fixed_ells[i];
    r.l_policy = s.str();
  }
  r.tested_k_max = v.tested_k_max;
  r.tested_l_max = v.tested_l_max;
  r.complete = v.complete;
  r.all_split = v.all_split;
  if (v.witness) r.witness = WitnessReport{v.witness->weight, v.witness->ell, v.witness->factor.coeffs(), v.witness->charpoly.coeffs()};
  for (const auto& ladder : v.ladders)
    if (ladder.period) r.periods[ladder_key(ladder.ell, ladder.start)] = *ladder.period;
  for (const auto& b : v.breaks) r.ladder_breaks.push_back({b.ell, b.weight, b.reason});
  r.bound_m = v.bound_m;
  r.assertions_checked = v.assertions_checked;
  r.cells = v.cells;
  return r;
}

inline void to_json(nlohmann::json& j, const WitnessReport& w) {
  j = {{"k", w.k}, {"l", w.l}, {"factor_coeffs", w.factor_coeffs}, {"charpoly_coeffs", w.charpoly_coeffs}};
}
inline void from_json(const nlohmann::json& j, WitnessReport& w) {
  j.at("k").get_to(w.k);
  j.at("l").get_to(w.l);
  j.at("factor_coeffs").get_to(w.factor_coeffs);
  j.at("charpoly_coeffs").get_to(w.charpoly_coeffs);
}

inline void to_json(nlohmann::json& j, const BreakReport& b) { j = {{"l", b.l}, {"k", b.k}, {"reason", b.reason}}; }
inline void from_json(const nlohmann::json& j, BreakReport& b) {
  j.at("l").get_to(b.l);
  j.at("k").get_to(b.k);
  j.at("reason").get_to(b.reason);
}

inline void to_json(nlohmann::json& j, const ScanReport& r) {
  j = {{"level", r.level},
       {"chi", r.chi},
       {"p", r.p},
       {"k_max", r.k_max},
       {"l_policy", r.l_policy},
       {"tested_k_max", r.tested_k_max},
       {"tested_l_max", r.tested_l_max},
       {"complete", r.complete},
       {"all_split", r.all_split},
       {"witness", nullptr},
       {"periods", r.periods},
       {"ladder_breaks", r.ladder_breaks},
       {"bound_M", r.bound_m},
       {"assertions_checked", r.assertions_checked},
       {"cells", r.cells}};
  if (r.witness) j["witness"] = *r.witness;
}

inline void from_json(const nlohmann::json& j, ScanReport& r) {
  j.at("level").get_to(r.level);
  j.at("chi").get_to(r.chi);
  j.at("p").get_to(r.p);
  j.at("k_max").get_to(r.k_max);
  j.at("l_policy").get_to(r.l_policy);
  j.at("tested_k_max").get_to(r.tested_k_max);
  j.at("tested_l_max").get_to(r.tested_l_max);
  j.at("complete").get_to(r.complete);
  j.at("all_split").get_to(r.all_split);
  if (j.at("witness").is_null())
    r.witness.reset();
  else
    r.witness = j.at("witness").get<WitnessReport>();
  j.at("periods").get_to(r.periods);
  j.at("ladder_breaks").get_to(r.ladder_breaks);
  j.at("bound_M").get_to(r.bound_m);
  j.at("assertions_checked").get_to(r.assertions_checked);
  j.at("cells").get_to(r.cells);
}

}  // namespace heckesplit
