#pragma once

// Split scans: reduce Hecke characteristic polynomials mod p, walk weight
// ladders k, k+q, k+2q, ... extracting the incremental factors
// f_j = T_{k0+jq} / T_{k0+(j-1)q}, and decide whether every T_l splits.
// Integer polynomials are cached in memory and optionally on disk as JSON.

#include <algorithm>
#include <chrono>
#include <exception>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "heckesplit/dimformulas.hpp"
#include "heckesplit/exactlinalg.hpp"
#include "heckesplit/ffpoly.hpp"
#include "heckesplit/modsym.hpp"

namespace heckesplit {

/// Raised when T_k does not divide T_{k+q} mod p where the inclusion of
/// reductions is guaranteed (p >= 5, dimensions nondecreasing).
class Lemma1Violation : public InternalError {
 public:
  using InternalError::InternalError;
};

/// Integer Hecke polynomials keyed by (N, chi, k, l). Thread-safe. With a
/// directory, each entry is one JSON file written atomically; unreadable or
/// mismatching files are ignored and recomputed.
class CharpolyStore {
 public:
  CharpolyStore() = default;
  explicit CharpolyStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(*dir_);
  }

  const std::optional<std::filesystem::path>& directory() const { return dir_; }

  static std::string file_name(const SpaceLabel& label, unsigned l) {
    std::ostringstream name;
    name << "N" << label.level << "_" << to_string(label.chi) << "_k" << label.weight << "_l" << l << ".json";
    return name.str();
  }

  static nlohmann::json to_json(const SpaceLabel& label, unsigned l, const IntPoly& f) {
    return {{"level", label.level}, {"chi", std::string(to_string(label.chi))}, {"weight", label.weight}, {"ell", l}, {"coeffs", f.coeff_strings()}};
  }

  /// Cached polynomial, or nullopt.
  std::optional<IntPoly> lookup(const SpaceLabel& label, unsigned l) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memory_.find({label, l});
      if (it != memory_.end()) return it->second;
    }
    if (!dir_) return std::nullopt;
    auto loaded = read_file(label, l);
    if (loaded) {
      std::lock_guard<std::mutex> lock(mutex_);
      memory_.emplace(std::make_pair(label, l), *loaded);
      ++disk_hits_;
    }
    return loaded;
  }

  void insert(const SpaceLabel& label, unsigned l, const IntPoly& f) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      memory_.insert_or_assign(std::make_pair(label, l), f);
    }
    if (dir_) write_file(label, l, f);
  }

  /// charpoly_hecke(label, l), computing missing entries. `space` is built on
  /// demand and may be shared across calls for the same label.
  IntPoly get(const SpaceLabel& label, unsigned l, std::shared_ptr<const ModularSymbolSpace>* space = nullptr) {
    if (auto hit = lookup(label, l)) return *hit;
    IntPoly f;
    if (!label.parity_ok()) {
      f = IntPoly::from_longs({1});
    } else {
      std::shared_ptr<const ModularSymbolSpace> local;
      auto& sp = space ? *space : local;
      if (!sp || !(sp->label() == label)) sp = std::make_shared<const ModularSymbolSpace>(build_space(label));
      f = charpoly(hecke_matrix(*sp, l));
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++computed_;
    }
    insert(label, l, f);
    return f;
  }

  std::size_t computed() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return computed_;
  }
  std::size_t disk_hits() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return disk_hits_;
  }

 private:
  std::optional<IntPoly> read_file(const SpaceLabel& label, unsigned l) const {
    const auto path = *dir_ / file_name(label, l);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.at("level").get<unsigned>() != label.level || j.at("chi").get<std::string>() != to_string(label.chi) ||
          j.at("weight").get<unsigned>() != label.weight || j.at("ell").get<unsigned>() != l)
        return std::nullopt;
      std::vector<mpz_class> coeffs;
      for (const auto& c : j.at("coeffs")) coeffs.emplace_back(c.get<std::string>());
      IntPoly f(std::move(coeffs));
      if (!f.is_monic()) return std::nullopt;
      return f;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void write_file(const SpaceLabel& label, unsigned l, const IntPoly& f) const {
    const auto path = *dir_ / file_name(label, l);
    std::ostringstream tag;
    tag << ".tmp." << std::this_thread::get_id();
    auto tmp = path;
    tmp += tag.str();
    {
      std::ofstream out(tmp);
      out << to_json(label, l, f).dump() << '\n';
      if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;
  std::map<std::pair<SpaceLabel, unsigned>, IntPoly> memory_;
  std::size_t computed_ = 0;
  std::size_t disk_hits_ = 0;
};

/// Reduction mod p of the Hecke polynomial of T_l on S_k(N, chi).
inline FpPoly charpoly_mod_p(const SpaceLabel& label, unsigned l, std::uint64_t p, CharpolyStore& store) {
  if (!is_prime(p)) throw std::invalid_argument("charpoly_mod_p: p must be prime");
  if (label.level % p == 0) throw std::invalid_argument("charpoly_mod_p: p must not divide the level");
  return store.get(label, l).reduce_mod(p);
}

/// f_0 = T_{k0} mod p and f_j = T_{k0+jq} / T_{k0+(j-1)q} mod p for j = 1..j_max.
/// Throws Lemma1Violation when a division is inexact.
inline std::vector<FpPoly> incremental_factors(unsigned level, CharKind chi, std::uint64_t p, unsigned l, unsigned k0,
                                               unsigned j_max, CharpolyStore& store) {
  const SpaceLabel first{level, k0, chi};
  if (k0 < 2) throw std::invalid_argument("incremental_factors: k0 must be at least 2");
  if (!first.parity_ok()) throw std::invalid_argument("incremental_factors: k0 has the wrong parity for the character");
  const unsigned q = weight_step(p);
  std::vector<FpPoly> out{charpoly_mod_p(first, l, p, store)};
  FpPoly prev = out.front();
  for (unsigned j = 1; j <= j_max; ++j) {
    const unsigned k = k0 + j * q;
    FpPoly next = charpoly_mod_p({level, k, chi}, l, p, store);
    auto [quot, rem] = poly_divrem(next, prev);
    if (!rem.is_zero()) {
      std::ostringstream msg;
      msg << "T_" << l << " at weight " << k - q << " does not divide weight " << k << " mod " << p << " (N=" << level
          << ", chi=" << to_string(chi) << "): " << next.to_string() << " = (" << quot.to_string() << ") * (" << prev.to_string()
          << ") + " << rem.to_string();
      throw Lemma1Violation(msg.str());
    }
    out.push_back(std::move(quot));
    prev = std::move(next);
  }
  return out;
}

/// Smallest s with fs[j + s] == fs[j] throughout, seen at least twice in full.
inline std::optional<std::size_t> detect_period(const std::vector<FpPoly>& fs) {
  if (fs.size() < 2) throw std::invalid_argument("detect_period: need at least two terms");
  for (std::size_t s = 1; 2 * s <= fs.size(); ++s) {
    bool ok = true;
    for (std::size_t j = 0; j + s < fs.size() && ok; ++j) ok = fs[j] == fs[j + s];
    if (ok) return s;
  }
  return std::nullopt;
}

struct Witness {
  unsigned weight;
  unsigned ell;
  FpPoly factor;     // first irreducible factor of degree >= 2
  FpPoly charpoly;   // the full reduced polynomial
};

/// One weight ladder for a fixed l: weights start, start+q, ... (consecutive
/// ones computed), with f[0] the polynomial at `start` and f[j] the quotients.
struct Ladder {
  unsigned ell;
  unsigned start;
  std::vector<FpPoly> factors;
  std::optional<std::size_t> period;
};

/// A point where a ladder had to restart.
struct LadderBreak {
  unsigned ell;
  unsigned weight;  // the higher weight of the failed step
  std::string reason;  // "dimension_drop" or "not_divisible"
};

struct ScanOptions {
  unsigned k_max = 30;
  std::vector<unsigned> fixed_ells;  // empty: every prime l <= sturm_bound(N, k)
  std::optional<std::chrono::steady_clock::time_point> deadline;
  unsigned workers = 1;
  std::uint64_t seed = 0;  // for factoring witnesses
};

struct LevelVerdict {
  unsigned level = 1;
  CharKind chi = CharKind::trivial;
  std::uint64_t p = 2;
  unsigned k_max = 0;
  std::string l_policy;
  unsigned tested_l_max = 0;
  unsigned tested_k_max = 0;  // last weight fully evaluated
  bool complete = true;       // false when the deadline cut the scan short
  bool all_split = true;
  std::optional<Witness> witness;
  std::vector<Ladder> ladders;
  std::vector<LadderBreak> breaks;
  long bound_m = 0;
  std::size_t assertions_checked = 0;
  std::size_t cells = 0;
};

/// Does every T_l split mod p on S_k(N, chi) for 2 <= k <= k_max?
inline LevelVerdict scan_level(unsigned level, CharKind chi, std::uint64_t p, const ScanOptions& options, CharpolyStore& store) {
  if (!is_prime(p)) throw std::invalid_argument("scan_level: p must be prime");
  if (level % p == 0) throw std::invalid_argument("scan_level: p must not divide the level");
  if (options.k_max < 2) throw std::invalid_argument("scan_level: k_max must be at least 2");
  (void)QuadChar(level, chi);

  LevelVerdict v;
  v.level = level;
  v.chi = chi;
  v.p = p;
  v.k_max = options.k_max;
  v.l_policy = options.fixed_ells.empty() ? "sturm" : "fixed";
  v.bound_m = bound_M(level, chi, p);
  const unsigned q = weight_step(p);

  auto ells_for = [&](unsigned k) {
    if (!options.fixed_ells.empty()) return options.fixed_ells;
    return primes_up_to(sturm_bound(level, k));
  };

  // Reduced polynomial at (k, l) and the open ladder through it.
  std::map<std::pair<unsigned, unsigned>, FpPoly> reduced;
  std::map<std::pair<unsigned, unsigned>, std::size_t> ladder_at;

  for (unsigned k = 2; k <= options.k_max; ++k) {
    const SpaceLabel label{level, k, chi};
    if (!label.parity_ok()) continue;  // zero space: vacuously split
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      v.complete = false;
      v.all_split = false;
      return v;
    }
    const std::vector<unsigned> ells = ells_for(k);
    // Integer polynomials for this weight, optionally in parallel; the
    // evaluation below is sequential and so independent of worker count.
    {
      std::shared_ptr<const ModularSymbolSpace> shared;
      std::vector<unsigned> missing;
      for (unsigned l : ells)
        if (!store.lookup(label, l)) missing.push_back(l);
      if (!missing.empty() && label.parity_ok() && dim_cusp_forms(label) > 0)
        shared = std::make_shared<const ModularSymbolSpace>(build_space(label));
      const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(missing.size())));
      if (workers <= 1) {
        for (unsigned l : missing) store.get(label, l, &shared);
      } else {
        std::vector<std::thread> pool;
        std::mutex next_mutex;
        std::size_t next = 0;
        std::exception_ptr failure;
        for (unsigned w = 0; w < workers; ++w)
          pool.emplace_back([&] {
            for (;;) {
              std::size_t i;
              {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next >= missing.size() || failure) return;
                i = next++;
              }
              try {
                auto sp = shared;
                store.get(label, missing[i], &sp);
              } catch (...) {
                std::lock_guard<std::mutex> lock(next_mutex);
                failure = std::current_exception();
              }
            }
          });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
      }
    }

    const long dim = dim_cusp_forms(label);
    for (unsigned l : ells) {
      const FpPoly f = charpoly_mod_p(label, l, p, store);
      ++v.cells;
      if (f.degree() != dim) throw InternalError("scan: reduced polynomial degree differs from the dimension");
      ++v.assertions_checked;
      reduced.emplace(std::make_pair(k, l), f);
      v.tested_l_max = std::max(v.tested_l_max, l);

      // Extend or open the ladder for (l, k mod q).
      std::optional<std::size_t> open;
      if (k >= 2 + q) {
        auto prev = reduced.find({k - q, l});
        if (prev != reduced.end()) {
          const long dim_prev = dim_cusp_forms({level, k - q, chi});
          if (dim < dim_prev) {
            v.breaks.push_back({l, k, "dimension_drop"});
          } else {
            auto [quot, rem] = poly_divrem(f, prev->second);
            ++v.assertions_checked;
            if (!rem.is_zero()) {
              if (p >= 5) {
                std::ostringstream msg;
                msg << "T_" << l << " mod " << p << " at weight " << k - q << " does not divide weight " << k << " (N=" << level
                    << ", chi=" << to_string(chi) << "): " << prev->second.to_string() << " vs " << f.to_string();
                throw Lemma1Violation(msg.str());
              }
              v.breaks.push_back({l, k, "not_divisible"});
            } else {
              if (quot.degree() > v.bound_m) {
                std::ostringstream msg;
                msg << "incremental factor of degree " << quot.degree() << " exceeds M = " << v.bound_m << " (N=" << level
                    << ", p=" << p << ", l=" << l << ", k=" << k << ")";
                throw InternalError(msg.str());
              }
              ++v.assertions_checked;
              open = ladder_at.at({k - q, l});
              v.ladders[*open].factors.push_back(std::move(quot));
            }
          }
        }
      }
      if (!open) {
        open = v.ladders.size();
        v.ladders.push_back({l, k, {f}, std::nullopt});
      }
      ladder_at[{k, l}] = *open;

      if (!is_totally_split(f)) {
        const Factorization fac = factor(f, options.seed);
        for (const auto& [g, e] : fac.factors)
          if (g.degree() >= 2) {
            v.witness = Witness{k, l, g, f};
            break;
          }
        if (!v.witness) throw InternalError("scan: non-split polynomial without a nonlinear factor");
        v.all_split = false;
        break;
      }
    }
    if (v.witness) break;
    v.tested_k_max = k;
  }
  for (auto& ladder : v.ladders)
    if (ladder.factors.size() >= 3) {
      const std::vector<FpPoly> tail(ladder.factors.begin() + 1, ladder.factors.end());
      ladder.period = detect_period(tail);
    }
  return v;
}

struct TableRow {
  unsigned level;
  std::vector<std::uint64_t> split;     // all_split within the caps
  std::vector<std::uint64_t> untested;  // cut short by the time budget
};

/// For each level, the primes p (p not dividing N) where scan_level reports
/// all_split. `budget` bounds each (N, p) scan.
inline std::vector<TableRow> build_table(const std::vector<unsigned>& levels, const std::vector<std::uint64_t>& primes, CharKind chi,
                                         unsigned k_max, std::optional<std::chrono::duration<double>> budget, CharpolyStore& store,
                                         unsigned workers = 1) {
  std::vector<TableRow> rows;
  for (unsigned n : levels) {
    if (n != 1 && n != 4 && !is_prime(n)) throw std::invalid_argument("build_table: levels must be 1, 4 or prime");
    if (chi == CharKind::legendre && (n == 1 || n == 2)) continue;
    TableRow row{n, {}, {}};
    for (std::uint64_t p : primes) {
      if (n % p == 0) continue;
      ScanOptions opts;
      opts.k_max = k_max;
      opts.workers = workers;
      if (budget)
        opts.deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(*budget);
      const LevelVerdict v = scan_level(n, chi, p, opts, store);
      if (!v.complete)
        row.untested.push_back(p);
      else if (v.all_split)
        row.split.push_back(p);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// "N | p1, p2, ..." lines under a header; cut-short cells follow as "p?".
inline std::string format_table(const std::vector<TableRow>& rows, CharKind chi) {
  std::ostringstream out;
  out << "N | primes p where all T_l split (" << to_string(chi) << " character)\n";
  for (const auto& row : rows) {
    out << row.level << " |";
    bool first = true;
    for (auto p : row.split) {
      out << (first ? " " : ", ") << p;
      first = false;
    }
    for (auto p : row.untested) {
      out << (first ? " " : ", ") << p << "? (untested)";
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace heckesplit
