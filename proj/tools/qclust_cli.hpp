#pragma once

// Command-line front end for the qclust library. Every subcommand produces a
// Report: one table, a list of checks and optional notes, written as CSV or
// JSON. Exit codes: 0 ok, 1 usage, 2 guard violation, 3 numeric failure or
// failed check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qclust/qclust.hpp"

namespace qclust::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kUsage = 1, kGuard = 2, kNumeric = 3 };

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string subcommand;
  Json config = Json::object();
  std::vector<std::string> columns;
  std::vector<Json> rows;  // objects keyed by column
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void add_row(Json row) { rows.push_back(std::move(row)); }
  void check(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct Options {
  std::optional<int> N, d;
  std::string cost;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
  bool asymptote = false;
  std::optional<int> n_min;
  int n_step = 1;
  std::string regime = "combined";
  double overlap = 0.5;
  int max_rows = 4;
  int pair_max = 12;
  std::uint64_t ks_samples = 100000;
  std::string protocol;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_boolean()) s = v.get<bool>() ? "true" : "false";
  else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
  else if (v.is_number_unsigned()) s = std::to_string(v.get<unsigned long long>());
  else if (v.is_number_float()) s = format_double(v.get<double>());
  else s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void write_csv(const Report& r, std::ostream& os) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_cell(r.columns[i]);
  os << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      const auto it = row.find(r.columns[i]);
      os << (i ? "," : "") << (it == row.end() ? "" : csv_cell(*it));
    }
    os << "\n";
  }
  for (const auto& n : r.notes) os << "# note: " << n << "\n";
  for (const auto& c : r.checks) os << "# check " << c.name << ": " << (c.pass ? "pass" : "FAIL") << " (" << c.detail << ")\n";
}

inline void write_json(const Report& r, std::ostream& os) {
  Json j;
  j["subcommand"] = r.subcommand;
  j["config"] = r.config;
  Json res = Json::object();
  res["columns"] = r.columns;
  res["rows"] = Json::array();
  for (const auto& row : r.rows) res["rows"].push_back(row);
  if (!r.notes.empty()) res["notes"] = r.notes;
  j["results"] = res;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  os << j.dump(2) << "\n";
}

inline Json rational_cell(const Rational& q) { return to_string(q); }

/// Key-value row: quantity, exact rational (optional), decimal.
inline Json quantity_row(const std::string& name, const std::optional<Rational>& exact, double decimal) {
  Json row;
  row["quantity"] = name;
  row["exact"] = exact ? Json(to_string(*exact)) : Json();
  row["decimal"] = decimal;
  return row;
}

inline Json quantity_row(const std::string& name, const Rational& q) { return quantity_row(name, q, q.get_d()); }
inline Json quantity_row(const std::string& name, double v) { return quantity_row(name, std::nullopt, v); }

inline int need_N(const Options& o, int fallback = -1) {
  if (o.N) return *o.N;
  if (fallback >= 0) return fallback;
  throw ContractError("-N is required");
}

inline int need_d(const Options& o, int fallback = 2) { return o.d ? *o.d : fallback; }

inline Json base_config(const Options& o, int N, int d) {
  Json c;
  c["N"] = N;
  c["d"] = d;
  c["format"] = o.format;
  return c;
}

inline std::string z_detail(const Estimate& e, double ref) {
  const double z = e.std_error > 0 ? (e.mean - ref) / e.std_error : 0.0;
  return "estimate " + format_double(e.mean) + " +- " + format_sci(e.std_error) + ", reference " + format_double(ref) +
         ", z = " + format_double(z);
}

// ---------------------------------------------------------------------------
// Asymptote sweeps

inline std::vector<int> sweep_values(const Options& o, int N) {
  const int lo = o.n_min.value_or(N);
  require(lo >= 1 && lo <= N, "--n-min must lie in [1, N]");
  require(o.n_step >= 1, "--n-step must be >= 1");
  std::vector<int> v;
  for (int n = lo; n <= N; n += o.n_step) v.push_back(n);
  if (v.back() != N) v.push_back(N);
  return v;
}

template <class Exact, class Asym>
Report sweep_report(const std::string& sub, const Options& o, int N, int d, const Exact& exact, const Asym& asym) {
  Report r;
  r.subcommand = sub;
  r.config = base_config(o, N, d);
  r.config["asymptote"] = true;
  r.config["n_min"] = o.n_min.value_or(N);
  r.config["n_step"] = o.n_step;
  r.columns = {"N", "exact", "exact_decimal", "asymptote", "ratio"};
  for (int n : sweep_values(o, N)) {
    const Rational q = exact(n);
    const double a = asym(n);
    r.add_row({{"N", n}, {"exact", to_string(q)}, {"exact_decimal", q.get_d()}, {"asymptote", a}, {"ratio", q.get_d() / a}});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Subcommands

inline constexpr std::int64_t kBruteforceDim = 256;
inline constexpr std::int64_t kHolevoDim = 81;

inline Report cmd_quantum(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  const Regime regime = parse_regime(o.regime);
  if (o.asymptote) {
    Report r = sweep_report(
        "quantum", o, N, d, [&](int n) { return success_probability_exact(n, d); },
        [&](int n) { return success_probability_asymptotic(std::max(n, 2), d, regime); });
    r.config["regime"] = regime_name(regime);
    return r;
  }
  Report r;
  r.subcommand = "quantum";
  r.config = base_config(o, N, d);
  r.columns = {"quantity", "exact", "decimal"};
  const Rational ps = success_probability_exact(N, d);
  r.add_row(quantity_row("success_probability", ps));
  if (N >= 2)
    for (Regime g : {Regime::combined, Regime::sublinear, Regime::linear, Regime::superlinear})
      r.add_row(quantity_row("asymptote_" + regime_name(g), success_probability_asymptotic(N, d, g)));

  const std::int64_t dim = checked_pow(d, N, kBruteforceDim);
  if (dim > kBruteforceDim) {
    r.notes.push_back("brute-force cross-check skipped: d^N exceeds " + std::to_string(kBruteforceDim));
    return r;
  }
  const Povm p = build_povm(N, d, kBruteforceDim);
  const Rational bf = success_probability_bruteforce(p);
  r.add_row(quantity_row("success_probability_bruteforce", bf));
  r.check("bruteforce_match", bf == ps, to_string(bf) + (bf == ps ? " == " : " != ") + to_string(ps));
  r.check("completeness", is_complete(p), "sum of POVM elements equals the identity");
  if (dim > kHolevoDim) {
    r.notes.push_back("Holevo check skipped: d^N exceeds " + std::to_string(kHolevoDim));
    return r;
  }
  const auto h = verify_holevo(p, CostFunction{}, o.tol.value_or(kPsdTolerance));
  r.check("holevo", h.pass, h.detail);
  return r;
}

inline Report cmd_classical(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  if (o.asymptote)
    return sweep_report(
        "classical", o, N, d, [&](int n) { return success_exact_unknown(n, d); },
        [&](int n) { return success_asymptotic_unknown(n, d); });
  Report r;
  r.subcommand = "classical";
  r.config = base_config(o, N, d);
  r.columns = {"quantity", "exact", "decimal"};
  const Rational ps = success_exact_unknown(N, d);
  const double asym = success_asymptotic_unknown(N, d);
  r.add_row(quantity_row("success_probability", ps));
  r.add_row(quantity_row("asymptote", asym));
  r.add_row(quantity_row("ratio", ps.get_d() / asym));
  if (N % 2 == 0) {
    const BigInt x0 = xi0(N, d);
    r.add_row(quantity_row("xi0", Rational(x0)));
    r.add_row(quantity_row("xi0_asymptote", xi0_asymptotic(N, d)));
  }
  try {
    const Rational bf = success_bruteforce_unknown(N, d);
    r.add_row(quantity_row("success_probability_bruteforce", bf));
    r.check("bruteforce_match", bf == ps, to_string(bf) + (bf == ps ? " == " : " != ") + to_string(ps));
  } catch (const GuardError& e) {
    r.notes.push_back(std::string("brute-force cross-check skipped: ") + e.what());
  }
  return r;
}

inline Report cmd_known_quantum(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  Report r;
  r.subcommand = "known-quantum";
  r.config = base_config(o, N, d);
  r.config["overlap"] = o.overlap;
  r.config["trials"] = o.trials;
  r.config["seed"] = o.seed;
  r.columns = {"quantity", "exact", "decimal"};
  const auto pure = average_success_known(N, d, KnownVariant::pure);
  const auto clus = average_success_known(N, d, KnownVariant::clustering);
  const auto unam = unambiguous_average(N, d);
  r.add_row(quantity_row("average_success", pure.value));
  r.add_row(quantity_row("average_success_clustering", clus.value));
  r.add_row(quantity_row("average_asymptote", pure.asymptote));
  r.add_row(quantity_row("unambiguous_average", unam.value));
  r.add_row(quantity_row("unambiguous_asymptote", unam.asymptote));
  const double exact_c = success_known_pure(o.overlap, N);
  r.add_row(quantity_row("success_at_overlap", exact_c));
  r.add_row(quantity_row("success_at_overlap_clustering", success_known_clustering(o.overlap, N)));
  const Estimate e = helstrom_simulate(o.overlap, N, o.trials, o.seed, KnownVariant::pure, o.threads);
  r.add_row(quantity_row("helstrom_estimate", e.mean));
  r.add_row(quantity_row("helstrom_std_error", e.std_error));
  r.check("helstrom_within_4sigma", e.within(exact_c), z_detail(e, exact_c));
  for (const auto* q : {&pure.quad, &clus.quad, &unam.quad})
    if (q->change > 1e-10) r.check("quadrature_converged", false, "change " + format_sci(q->change));
  if (o.overlap < 1.0 && N <= 10) {
    const auto m = verify_known_mixed_povm(o.overlap, N, o.tol.value_or(1e-9));
    const double ref = success_known_clustering(o.overlap, N);
    r.check("mixed_state_povm", m.pass && std::abs(m.success - ref) <= 1e-9,
            "min eigenvalue " + format_sci(m.min_eigenvalue) + ", success " + format_double(m.success));
  }
  return r;
}

inline Report cmd_known_classical(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  Report r;
  r.subcommand = "known-classical";
  r.config = base_config(o, N, d);
  r.config["trials"] = o.trials;
  r.config["seed"] = o.seed;
  r.columns = {"quantity", "exact", "decimal"};
  const Estimate e = average_known_classical_mc(N, d, o.trials, o.seed, o.threads);
  std::optional<Rational> exact;
  if (d <= 3) {
    exact = average_known_classical_exact(N, d);
    r.add_row(quantity_row("average_success", *exact));
  }
  r.add_row(quantity_row("average_success_mc", e.mean));
  r.add_row(quantity_row("average_success_mc_std_error", e.std_error));
  r.add_row(quantity_row("asymptote", average_known_classical_asymptotic(N, d)));
  if (exact) r.check("mc_within_4sigma", e.within(exact->get_d()), z_detail(e, exact->get_d()));
  try {
    const Rational unknown = success_exact_unknown(N, d);
    r.add_row(quantity_row("unknown_success", unknown));
    const double known = exact ? exact->get_d() : e.mean;
    r.check("known_at_least_unknown", known + (exact ? 0.0 : 4 * e.std_error) >= unknown.get_d(),
            format_double(known) + " vs " + format_double(unknown.get_d()));
  } catch (const GuardError& g) {
    r.notes.push_back(std::string("unknown-distribution comparison skipped: ") + g.what());
  }
  return r;
}

inline std::vector<CostFunction> selected_costs(const Options& o) {
  if (o.cost.empty() || o.cost == "all") return all_costs();
  return {parse_cost(o.cost)};
}

inline Report cmd_table1(const Options& o, bool n_given) {
  const int n_max = need_N(o, 8), d = need_d(o);
  const int n_min = o.n_min.value_or(n_given ? n_max : 4);
  require(n_min >= 2 && n_min <= n_max, "need 2 <= --n-min <= N");
  Report r;
  r.subcommand = "table1";
  r.config = base_config(o, n_max, d);
  r.config["n_min"] = n_min;
  r.config["cost"] = o.cost.empty() ? "all" : o.cost;
  r.columns = {"cost", "N", "lambda1", "lambda2", "guesses"};
  for (const auto& f : selected_costs(o))
    for (int N = n_min; N <= n_max; ++N) {
      const GuessTable t = guess_rule_general(f, N, d);
      for (const auto& e : t.entries) {
        if (e.lambda.length() > 2) continue;
        r.add_row({{"cost", f.name()}, {"N", N}, {"lambda1", e.lambda.part(0)}, {"lambda2", e.lambda.part(1)},
                   {"guesses", e.guesses_str()}});
      }
    }
  return r;
}

inline Report cmd_heatmap(const Options& o) {
  const int N = need_N(o);
  require(N >= 2, "N must be >= 2");
  const Heatmap m = hamming_heatmap(N);
  Report r;
  r.subcommand = "heatmap";
  r.config = base_config(o, N, need_d(o));
  r.columns.push_back("x");
  for (const auto& l : m.labels) r.columns.push_back(l);
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    Json row;
    row["x"] = m.labels[i];
    for (std::size_t j = 0; j < m.labels.size(); ++j) row[m.labels[j]] = m.h[i][j];
    r.add_row(std::move(row));
  }
  return r;
}

inline Report cmd_partitions(const Options& o) {
  const int N = need_N(o);
  require(o.max_rows >= 1, "-r must be >= 1");
  Report r;
  r.subcommand = "partitions";
  r.config = base_config(o, N, need_d(o));
  r.config["max_rows"] = o.max_rows;
  r.columns = {"N", "r", "exact", "asymptotic", "ratio"};
  for (int k = 1; k <= o.max_rows; ++k) {
    const auto c = count_partitions_max_len(N, k);
    r.add_row({{"N", N}, {"r", k}, {"exact", to_string(c.exact)}, {"asymptotic", c.asymptotic},
               {"ratio", c.exact.get_d() / c.asymptotic}});
  }
  return r;
}

inline Report cmd_mc(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  Report r;
  r.subcommand = "mc";
  r.config = base_config(o, N, d);
  r.config["protocol"] = o.protocol;
  r.config["trials"] = o.trials;
  r.config["seed"] = o.seed;
  r.columns = {"protocol", "N", "d", "trials", "estimate", "std_error", "reference"};
  Estimate e;
  double ref = 0.0;
  if (o.protocol == "classical-unknown") {
    e = simulate_unknown_protocol(N, d, o.trials, o.seed, o.threads);
    ref = success_exact_unknown(N, d).get_d();
  } else if (o.protocol == "classical-known") {
    e = simulate_known_protocol(N, d, o.trials, o.seed, o.threads);
    if (d <= 3) {
      ref = average_known_classical_exact(N, d).get_d();
    } else {
      ref = average_known_classical_mc(N, d, o.trials, o.seed + 1, o.threads).mean;
      r.notes.push_back("reference is an independent Monte Carlo average of the pairwise formula (seed + 1)");
    }
  } else if (o.protocol == "helstrom") {
    r.config["overlap"] = o.overlap;
    e = helstrom_simulate(o.overlap, N, o.trials, o.seed, KnownVariant::pure, o.threads);
    ref = success_known_pure(o.overlap, N);
  } else {
    throw ContractError("unknown protocol '" + o.protocol + "' (use classical-unknown, classical-known or helstrom)");
  }
  r.add_row({{"protocol", o.protocol}, {"N", N}, {"d", d}, {"trials", o.trials}, {"estimate", e.mean},
             {"std_error", e.std_error}, {"reference", ref}});
  r.check("within_4sigma", e.within(ref), z_detail(e, ref));
  return r;
}

// verify ----------------------------------------------------------------

inline Report verify_holevo_cmd(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  const CostFunction f = o.cost.empty() ? CostFunction{} : parse_cost(o.cost);
  const double tol = o.tol.value_or(kPsdTolerance);
  Report r;
  r.subcommand = "verify holevo";
  r.config = base_config(o, N, d);
  r.config["cost"] = f.name();
  r.config["tol"] = tol;
  r.columns = {"povm", "equality", "psd", "min_eigenvalue", "relative_min", "pass"};
  auto add = [&](const std::string& name, const HolevoReport& h) {
    r.add_row({{"povm", name}, {"equality", h.equality}, {"psd", h.psd}, {"min_eigenvalue", h.min_eigenvalue},
               {"relative_min", h.relative_min}, {"pass", h.pass}});
  };
  const Povm p = f.kind == CostKind::zero_one ? build_povm(N, d) : build_povm(guess_rule_general(f, N, d));
  const auto h = verify_holevo(p, f, tol);
  add("optimal", h);
  r.check("holevo_optimal", h.pass, h.detail);
  if (f.kind == CostKind::zero_one && N >= 2) {
    const auto hp = verify_holevo(perturbed_povm(N, d), f, tol);
    add("perturbed", hp);
    r.check("negative_control_rejected", !hp.pass, hp.detail);
  }
  return r;
}

inline Report verify_completeness_cmd(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  Report r;
  r.subcommand = "verify completeness";
  r.config = base_config(o, N, d);
  r.columns = {"quantity", "exact", "decimal"};
  const Povm p = build_povm(N, d);
  r.check("completeness", is_complete(p), "sum of POVM elements equals the identity");
  std::vector<Permutation> taus;
  for (int k = 0; k + 1 < N; ++k) taus.push_back(Permutation::transposition(N, k, k + 1));
  r.check("covariance", is_covariant(p, taus), "E_{tau x} = U_tau E_x U_tau^T for adjacent transpositions");
  if (d >= 2) {
    const Rational bf = success_probability_bruteforce(p), ps = success_probability_exact(N, d);
    r.add_row(quantity_row("success_probability", ps));
    r.add_row(quantity_row("success_probability_bruteforce", bf));
    r.check("bruteforce_match", bf == ps, to_string(bf) + (bf == ps ? " == " : " != ") + to_string(ps));
  }
  return r;
}

inline Report verify_conjecture_cmd(const Options& o) {
  const int N = need_N(o), d = need_d(o);
  const double tol = o.tol.value_or(kConjectureTolerance);
  Report r;
  r.subcommand = "verify conjecture";
  r.config = base_config(o, N, d);
  r.config["cost"] = o.cost.empty() ? "all" : o.cost;
  r.config["tol"] = tol;
  r.columns = {"cost", "N", "irrep", "n", "residual", "pass"};
  const StateBank bank(N, d);
  for (const auto& f : selected_costs(o)) {
    const auto a = analyze_cost(f, bank);
    const auto t = guess_rule_general(a);
    bool ok = true;
    for (const auto& c : check_conjecture(a, t, tol)) {
      ok &= c.pass;
      r.add_row({{"cost", f.name()}, {"N", N}, {"irrep", c.lambda.str()}, {"n", c.n}, {"residual", c.residual},
                 {"pass", c.pass}});
    }
    r.check("conjecture_" + f.name(), ok, "minimum average cost " + format_double(min_average_cost(t)));
  }
  return r;
}

inline Report verify_dimensions_cmd(const Options& o) {
  const int N = need_N(o, 10), d = need_d(o, 5);
  Report r;
  r.subcommand = "verify dimensions";
  r.config = base_config(o, N, d);
  r.config["pair_max"] = o.pair_max;
  r.columns = {"identity", "N", "d", "n", "nbar", "lhs", "rhs", "pass"};
  bool all_sum = true, all_c1 = true, all_c2 = true;
  for (int n = 1; n <= N; ++n)
    for (int q = 1; q <= d; ++q) {
      BigInt lhs = 0;
      for (const auto& lam : enumerate_partitions(n, q)) lhs += dim_unitary_irrep(lam, q) * dim_symgroup_irrep(lam);
      const BigInt rhs = ipow(q, static_cast<unsigned long>(n));
      all_sum &= lhs == rhs;
      r.add_row({{"identity", "sum_s_nu"}, {"N", n}, {"d", q}, {"lhs", lhs.get_str()}, {"rhs", rhs.get_str()},
                 {"pass", lhs == rhs}});
    }
  for (int total = 1; total <= o.pair_max; ++total)
    for (int n = 0; 2 * n <= total; ++n) {
      const int nb = total - n;
      for (int q = 2; q <= d; ++q) {
        BigInt rhs = 0;
        for (int i = 0; i <= n; ++i) rhs += dim_unitary_two_row(total - i, i, q);
        const BigInt lhs = dim_symmetric(nb, q) * dim_symmetric(n, q);
        all_c1 &= lhs == rhs;
        r.add_row({{"identity", "symmetric_product"}, {"d", q}, {"n", n}, {"nbar", nb}, {"lhs", lhs.get_str()},
                   {"rhs", rhs.get_str()}, {"pass", lhs == rhs}});
      }
      BigInt rhs = 0;
      for (int i = 0; i <= n; ++i) rhs += dim_symgroup_two_row(total - i, i);
      const BigInt lhs = binomial(total, n);
      all_c2 &= lhs == rhs;
      r.add_row({{"identity", "binomial_multiplicity"}, {"n", n}, {"nbar", nb}, {"lhs", lhs.get_str()},
                 {"rhs", rhs.get_str()}, {"pass", lhs == rhs}});
    }
  r.check("sum_s_nu", all_sum, "sum_lambda s_lambda nu_lambda = d^N");
  r.check("symmetric_product", all_c1, "s_(nbar) s_(n) = sum_i s_(n+nbar-i,i)");
  r.check("binomial_multiplicity", all_c2, "C(n+nbar, n) = sum_i nu_(n+nbar-i,i)");
  return r;
}

inline std::string moment_label(const std::vector<int>& n) {
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? " " : "") + std::to_string(n[i]);
  return s;
}

inline Report verify_moments_cmd(const Options& o) {
  const int dmax = need_d(o, 3);
  require(dmax >= 2, "d must be >= 2");
  Report r;
  r.subcommand = "verify moments";
  r.config["d"] = dmax;
  r.config["trials"] = o.trials;
  r.config["seed"] = o.seed;
  r.config["ks_samples"] = o.ks_samples;
  r.config["format"] = o.format;
  r.columns = {"sampler", "d", "moment", "exact", "exact_decimal", "estimate", "std_error", "pass"};
  for (int d = 2; d <= dmax; ++d) {
    const auto vecs = moment_vectors(d, 3);
    for (PriorSampler s : {PriorSampler::simplex, PriorSampler::haar}) {
      const std::string name = s == PriorSampler::simplex ? "simplex" : "haar";
      const auto est = empirical_moments(d, 3, s, o.trials, o.seed + static_cast<std::uint64_t>(d) * 2 + (s == PriorSampler::haar),
                                         o.threads);
      bool ok = true;
      for (std::size_t i = 0; i < vecs.size(); ++i) {
        const Rational m = simplex_moment(vecs[i]);
        const bool pass = est[i].within(m.get_d());
        ok &= pass;
        r.add_row({{"sampler", name}, {"d", d}, {"moment", moment_label(vecs[i])}, {"exact", to_string(m)},
                   {"exact_decimal", m.get_d()}, {"estimate", est[i].mean}, {"std_error", est[i].std_error},
                   {"pass", pass}});
      }
      r.check("moments_" + name + "_d" + std::to_string(d), ok, "all moments of degree <= 3 within 4 sigma");
    }
    const auto a = sample_first_component(d, PriorSampler::simplex, o.ks_samples, o.seed + 1000 + d);
    const auto b = sample_first_component(d, PriorSampler::haar, o.ks_samples, o.seed + 2000 + d);
    const double stat = ks_statistic(a, b), pv = ks_pvalue(stat, a.size(), b.size());
    r.check("ks_p1_d" + std::to_string(d), pv >= 0.001, "D = " + format_sci(stat) + ", p = " + format_sci(pv));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Entry point

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-N", o.N, "number of systems or data points");
  sub->add_option("-d", o.d, "local dimension or alphabet size");
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("-o,--output", o.output, "write the report to this file");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sub->add_option("--tol", o.tol, "tolerance override");
}

inline void add_mc_flags(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "random seed");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qclust: optimal clustering of quantum states and classical data"};
  app.require_subcommand(1);
  Options o;

  auto* quantum = app.add_subcommand("quantum", "universal quantum clustering: exact and asymptotic success");
  add_common(quantum, o);
  quantum->add_flag("--asymptote", o.asymptote, "emit exact vs asymptote as N, exact, asymptote, ratio");
  quantum->add_option("--regime", o.regime, "asymptotic regime")
      ->check(CLI::IsMember({"combined", "sublinear", "linear", "superlinear"}));
  quantum->add_option("--n-min", o.n_min, "first N of an asymptote sweep");
  quantum->add_option("--n-step", o.n_step, "step of an asymptote sweep");

  auto* classical = app.add_subcommand("classical", "classical clustering with unknown distributions");
  add_common(classical, o);
  classical->add_flag("--asymptote", o.asymptote, "emit exact vs asymptote as N, exact, asymptote, ratio");
  classical->add_option("--n-min", o.n_min, "first N of an asymptote sweep");
  classical->add_option("--n-step", o.n_step, "step of an asymptote sweep");

  auto* kq = app.add_subcommand("known-quantum", "quantum clustering with known states");
  add_common(kq, o);
  add_mc_flags(kq, o);
  kq->add_option("--overlap", o.overlap, "overlap c = |<phi_0|phi_1>| for the simulator")->check(CLI::Range(0.0, 1.0));

  auto* kc = app.add_subcommand("known-classical", "classical clustering with known distributions");
  add_common(kc, o);
  add_mc_flags(kc, o);

  auto* table1 = app.add_subcommand("table1", "optimal guesses n(lambda) for each cost function");
  add_common(table1, o);
  table1->add_option("--cost", o.cost, "delta, h, T, I or all");
  table1->add_option("--n-min", o.n_min, "smallest N (default 4, or N when -N is given)");

  auto* heatmap = app.add_subcommand("heatmap", "Hamming distances between clusterings");
  add_common(heatmap, o);

  auto* partitions = app.add_subcommand("partitions", "partition counts with at most r parts");
  add_common(partitions, o);
  partitions->add_option("-r,--rows", o.max_rows, "largest number of parts");

  auto* mc = app.add_subcommand("mc", "Monte Carlo simulation of a protocol");
  add_common(mc, o);
  add_mc_flags(mc, o);
  mc->add_option("protocol", o.protocol, "classical-unknown, classical-known or helstrom")->required();
  mc->add_option("--overlap", o.overlap, "overlap for the helstrom protocol")->check(CLI::Range(0.0, 1.0));

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  auto* v_holevo = verify->add_subcommand("holevo", "optimality conditions for the built POVM");
  add_common(v_holevo, o);
  v_holevo->add_option("--cost", o.cost, "delta or h");
  auto* v_complete = verify->add_subcommand("completeness", "completeness, covariance and brute-force success");
  add_common(v_complete, o);
  auto* v_conj = verify->add_subcommand("conjecture", "minimal-eigenspace property for general costs");
  add_common(v_conj, o);
  v_conj->add_option("--cost", o.cost, "delta, h, T, I or all");
  auto* v_dims = verify->add_subcommand("dimensions", "irrep dimension identities");
  add_common(v_dims, o);
  v_dims->add_option("--pair-max", o.pair_max, "largest n + nbar for the two-row identities");
  auto* v_moments = verify->add_subcommand("moments", "prior moments and Kolmogorov-Smirnov test");
  add_common(v_moments, o);
  add_mc_flags(v_moments, o);
  v_moments->add_option("--ks-samples", o.ks_samples, "samples per sampler for the KS test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    Report r;
    if (*quantum) r = cmd_quantum(o);
    else if (*classical) r = cmd_classical(o);
    else if (*kq) r = cmd_known_quantum(o);
    else if (*kc) r = cmd_known_classical(o);
    else if (*table1) r = cmd_table1(o, o.N.has_value());
    else if (*heatmap) r = cmd_heatmap(o);
    else if (*partitions) r = cmd_partitions(o);
    else if (*mc) r = cmd_mc(o);
    else if (*v_holevo) r = verify_holevo_cmd(o);
    else if (*v_complete) r = verify_completeness_cmd(o);
    else if (*v_conj) r = verify_conjecture_cmd(o);
    else if (*v_dims) r = verify_dimensions_cmd(o);
    else if (*v_moments) r = verify_moments_cmd(o);

    std::ostringstream buf;
    if (o.format == "json") write_json(r, buf);
    else write_csv(r, buf);
    if (o.output.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw ContractError("cannot open output file '" + o.output + "'");
      f << buf.str();
    }
    for (const auto& c : r.checks)
      if (!c.pass) err << "check failed: " << c.name << " (" << c.detail << ")\n";
    return r.all_pass() ? kOk : kNumeric;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const ContractError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const StructureError& e) {
    err << "structure: " << e.what() << "\n";
    return kNumeric;
  } catch (const NumericError& e) {
    err << "numeric: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace qclust::cli
