// heckesplit: dimensions, Hecke polynomials and mod-p split scans.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckesplit/dimformulas.hpp"
#include "heckesplit/ffpoly.hpp"
#include "heckesplit/modsym.hpp"
#include "heckesplit/report.hpp"
#include "heckesplit/scan.hpp"

namespace hs = heckesplit;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_kmax(unsigned level) { return level <= 100 ? 30 : 20; }

void check_level(unsigned level) {
  if (level != 1 && level != 4 && !hs::is_prime(level))
    throw UsageError("level must be 1, 4 or a prime, got " + std::to_string(level));
}

void check_p(std::uint64_t p, unsigned level) {
  if (!hs::is_prime(p)) throw UsageError("p must be prime, got " + std::to_string(p));
  if (level % p == 0)
    throw UsageError("p = " + std::to_string(p) + " divides the level " + std::to_string(level) +
                     "; the reductions studied here require p not dividing N");
}

hs::CharpolyStore open_store(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty())
    if (const char* env = std::getenv("HECKESPLIT_CACHE")) dir = env;
  if (dir.empty()) return hs::CharpolyStore();
  return hs::CharpolyStore(dir);
}

std::vector<unsigned> parse_ells(const std::string& spec) {
  if (spec == "sturm") return {};
  std::vector<unsigned> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    unsigned long l = 0;
    try {
      l = std::stoul(item);
    } catch (const std::exception&) {
      throw UsageError("--ells expects 'sturm' or a comma-separated list of primes, got '" + spec + "'");
    }
    if (!hs::is_prime(l)) throw UsageError("--ells: " + item + " is not prime");
    out.push_back(static_cast<unsigned>(l));
  }
  if (out.empty()) throw UsageError("--ells: empty list");
  return out;
}

void print_scan_text(const hs::ScanReport& r) {
  std::cout << "level " << r.level << ", " << r.chi << " character, p = " << r.p << '\n';
  std::cout << "caps: k <= " << r.k_max << ", l policy " << r.l_policy << " (largest l tested " << r.tested_l_max << ")\n";
  if (!r.complete) std::cout << "untested: time budget exhausted after weight " << r.tested_k_max << '\n';
  std::cout << "all_split: " << (r.all_split ? "true" : "false") << '\n';
  if (r.witness) {
    const auto& w = *r.witness;
    std::cout << "witness: k = " << w.k << ", l = " << w.l << ", factor "
              << hs::FpPoly(r.p, w.factor_coeffs).to_string() << '\n';
  }
  std::cout << "M = " << r.bound_m << ", assertions checked: " << r.assertions_checked << ", cells: " << r.cells << '\n';
  for (const auto& [key, s] : r.periods) std::cout << "period " << key << ": " << s << '\n';
  for (const auto& b : r.ladder_breaks) std::cout << "ladder restart at l = " << b.l << ", k = " << b.k << " (" << b.reason << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mod-p splitting of Hecke polynomials on S_k(Gamma_0(N), chi)"};
  app.require_subcommand(1);

  unsigned level = 1, weight = 2, ell = 2, kmax = 0, workers = 1, dmax = 10;
  std::uint64_t p = 2, seed = 0;
  std::string character = "trivial", cache, format = "text", ells = "sturm", levels_flag, primes_flag;
  double budget = 0;
  unsigned max_level = 100, max_prime = 19;
  bool with_symbols = false;

  auto add_character = [&](CLI::App* sub) {
    sub->add_option("--character,-c", character, "trivial or legendre")->check(CLI::IsMember({"trivial", "legendre"}));
  };
  auto add_format = [&](CLI::App* sub) { sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"})); };

  auto* dim = app.add_subcommand("dim", "dimension of the space of cusp forms");
  dim->add_option("--level,-N", level)->required();
  dim->add_option("--weight,-k", weight)->required();
  add_character(dim);
  dim->add_flag("--modular-symbols", with_symbols, "also report cuspidal modular symbol dimensions");

  auto* cp = app.add_subcommand("charpoly", "characteristic polynomial of T_l");
  cp->add_option("--level,-N", level)->required();
  cp->add_option("--weight,-k", weight)->required();
  cp->add_option("--ell,-l", ell)->required();
  add_character(cp);
  add_format(cp);
  cp->add_option("--cache", cache, "cache directory (default $HECKESPLIT_CACHE)");

  auto* scan = app.add_subcommand("scan", "check that every T_l splits mod p up to a weight cap");
  scan->add_option("--level,-N", level)->required();
  scan->add_option("--p", p)->required();
  scan->add_option("--kmax", kmax, "weight cap (default 30 for N <= 100, else 20)");
  scan->add_option("--ells", ells, "'sturm' or a comma-separated list of primes");
  add_character(scan);
  add_format(scan);
  scan->add_option("--cache", cache, "cache directory (default $HECKESPLIT_CACHE)");
  scan->add_option("--workers", workers)->check(CLI::PositiveNumber);
  scan->add_option("--budget", budget, "time budget in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  scan->add_option("--seed", seed, "seed for factoring witnesses");

  auto* table = app.add_subcommand("table", "levels and primes where every T_l splits");
  table->add_option("--levels", levels_flag, "comma-separated levels (default 1, 4 and primes up to --max-level)");
  table->add_option("--primes", primes_flag, "comma-separated primes p (default primes up to --max-prime)");
  table->add_option("--max-level", max_level);
  table->add_option("--max-prime", max_prime);
  table->add_option("--kmax", kmax, "weight cap (default 30 for N <= 100, else 20)");
  add_character(table);
  table->add_option("--cache", cache, "cache directory (default $HECKESPLIT_CACHE)");
  table->add_option("--workers", workers)->check(CLI::PositiveNumber);
  table->add_option("--budget", budget, "time budget per (N, p) in seconds (0 = none)")->check(CLI::NonNegativeNumber);

  auto* heur = app.add_subcommand("heuristic", "number and share of monic split polynomials of degree d over F_p");
  heur->add_option("--p", p)->required();
  heur->add_option("--dmax", dmax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const hs::CharKind chi = hs::parse_char_kind(character);
    if (*dim) {
      check_level(level);
      const hs::SpaceLabel label{level, weight, chi};
      std::cout << hs::dim_cusp_forms(label) << '\n';
      if (with_symbols) {
        std::cout << "cuspidal modular symbols, plus quotient: " << hs::build_space(label).cuspidal_dimension() << '\n';
        std::cout << "cuspidal modular symbols, full: " << hs::ModularSymbolSpace(label, 0).cuspidal_dimension() << '\n';
      }
    } else if (*cp) {
      check_level(level);
      if (!hs::is_prime(ell)) throw UsageError("--ell must be prime");
      hs::CharpolyStore store = open_store(cache);
      const hs::SpaceLabel label{level, weight, chi};
      if (weight < 2) throw UsageError("--weight must be at least 2");
      const hs::IntPoly f = store.get(label, ell);
      if (format == "json") {
        std::cout << hs::CharpolyStore::to_json(label, ell, f).dump(2) << '\n';
      } else {
        std::cout << f.to_string() << '\n';
        std::cout << "coefficients (ascending):";
        for (const auto& c : f.coeff_strings()) std::cout << ' ' << c;
        std::cout << '\n';
      }
    } else if (*scan) {
      check_level(level);
      check_p(p, level);
      hs::ScanOptions opts;
      opts.k_max = kmax ? kmax : default_kmax(level);
      opts.fixed_ells = parse_ells(ells);
      opts.workers = workers;
      opts.seed = seed;
      if (budget > 0)
        opts.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(budget));
      hs::CharpolyStore store = open_store(cache);
      const hs::ScanReport report = hs::make_report(hs::scan_level(level, chi, p, opts, store), opts);
      if (format == "json")
        std::cout << nlohmann::json(report).dump(2) << '\n';
      else
        print_scan_text(report);
    } else if (*table) {
      std::vector<unsigned> levels;
      if (!levels_flag.empty()) {
        std::stringstream in(levels_flag);
        std::string item;
        while (std::getline(in, item, ',')) {
          try {
            levels.push_back(static_cast<unsigned>(std::stoul(item)));
          } catch (const std::exception&) {
            throw UsageError("--levels: cannot parse '" + item + "'");
          }
          check_level(levels.back());
        }
      } else {
        if (max_level >= 1) levels.push_back(1);
        if (chi == hs::CharKind::legendre && max_level >= 4) levels.push_back(4);
        for (unsigned n : hs::primes_up_to(max_level)) levels.push_back(n);
        std::sort(levels.begin(), levels.end());
      }
      std::vector<std::uint64_t> primes;
      if (!primes_flag.empty()) {
        for (unsigned x : parse_ells(primes_flag)) primes.push_back(x);
      } else {
        for (unsigned x : hs::primes_up_to(max_prime)) primes.push_back(x);
      }
      hs::CharpolyStore store = open_store(cache);
      std::optional<std::chrono::duration<double>> per_cell;
      if (budget > 0) per_cell = std::chrono::duration<double>(budget);
      std::vector<hs::TableRow> rows;
      for (unsigned n : levels) {
        const auto part = hs::build_table({n}, primes, chi, kmax ? kmax : default_kmax(n), per_cell, store, workers);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      std::cout << hs::format_table(rows, chi);
    } else if (*heur) {
      if (!hs::is_prime(p)) throw UsageError("--p must be prime");
      std::cout << "d | split monic polynomials | share of all monic\n";
      for (unsigned d = 0; d <= dmax; ++d) {
        const mpq_class share = hs::split_probability(p, d);
        std::cout << d << " | " << hs::count_split_polys(p, d).get_str() << " | " << share.get_str() << " (" << std::setprecision(6)
                  << share.get_d() << ")\n";
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const hs::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
