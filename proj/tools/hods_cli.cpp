// hods: command-line front end for construction, verification and studies.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or invalid input,
// 3 enumeration or size budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hods/hods.hpp"

#ifndef HODS_VERSION
#define HODS_VERSION "dev"
#endif

namespace {

using hods::GeneratingMatrixSet;
using hods::PointSet;
using hods::Rational;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Options {
  // shared
  unsigned threads = 1;
  std::string out;
  std::string manifest;
  std::string replay;
  // construction
  std::size_t s = 2;
  std::size_t m = 4;
  std::uint64_t n_points = 0;
  int order = 2;
  unsigned precision = 0;
  std::string shift;
  std::string format = "csv-decimal";
  bool propagate = false;
  bool zero_matrices = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
  // verify
  std::optional<std::size_t> t;
  // dual
  std::size_t limit = 0;
  // walsh
  std::string check = "orthogonality";
  std::uint64_t max_index = 64;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  unsigned resolution = 10;
  // disc / study
  double q = 2;
  bool allow_any_q = false;
  std::string input;
  std::string source = "order2";
  std::size_t m_min = 1, m_max = 10;
  std::uint64_t n_min = 2, n_max = 64;
};

struct Result {
  int code = kExitOk;
  json meta = json::object();
};

GeneratingMatrixSet build_matrices(const Options& o, std::size_t rows, std::size_t cols) {
  if (o.zero_matrices) return GeneratingMatrixSet::zero(o.s, rows, cols);
  if (o.order == 1) return hods::niederreiter_set(o.s, rows, cols);
  if (o.order == 2) return hods::interlaced_niederreiter(o.s, rows, cols);
  throw hods::InvalidInput("--order must be 1 or 2");
}

std::uint64_t parse_hex_seed(const std::string& text) {
  if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
    throw hods::InvalidInput("--shift takes a hex seed such as 0x2a");
  std::size_t used = 0;
  const std::uint64_t v = std::stoull(text.substr(2), &used, 16);
  if (used != text.size() - 2) throw hods::InvalidInput("--shift: bad hex digits in '" + text + "'");
  return v;
}

void require_q(const Options& o, json& meta) {
  if (!hods::is_even_integer(o.q)) {
    if (!o.allow_any_q)
      throw hods::InvalidInput("--q " + hods::format_double(o.q) +
                               ": the convergence theorems cover even integers q >= 2; pass --allow-any-q to "
                               "estimate anyway (results are flagged outside_theorems)");
    meta["outside_theorems"] = true;
    std::cerr << "note: q = " << hods::format_double(o.q) << " lies outside the theorems (even q only)\n";
  }
}

// ---------------------------------------------------------------------------

Result cmd_gen(const Options& o, std::ostream& os) {
  Result r;
  const hods::PointFormat format = hods::parse_point_format(o.format);
  if (o.propagate) {
    if (o.n_points == 0) throw hods::InvalidInput("--propagate needs --n-points");
    if (o.order != 2) throw hods::InvalidInput("--propagate works on order-2 (interlaced) nets");
    if (!o.shift.empty()) throw hods::InvalidInput("--shift cannot be combined with --propagate");
    const std::size_t m = hods::propagation_level(o.n_points);
    PointSet p = hods::propagation_point_set(hods::interlaced_niederreiter(o.s, 2 * m, m), o.n_points);
    if (o.precision != 0 && o.precision != p.precision())
      throw hods::InvalidInput("propagated sets carry 2m = " + std::to_string(p.precision()) + " digits");
    hods::write_points(os, p, format);
    r.meta["points"] = p.size();
    return r;
  }
  std::size_t m = o.m;
  if (o.n_points != 0) m = std::max<std::size_t>(1, hods::propagation_level(o.n_points));
  const unsigned w = o.precision != 0 ? o.precision : static_cast<unsigned>(2 * m);
  if (w > hods::kMaxPrecision) throw hods::InvalidInput("--precision is limited to 64 digits");
  const GeneratingMatrixSet g = build_matrices(o, w, m);
  PointSet p = o.n_points != 0 ? hods::sequence_points(g, o.n_points, w) : hods::net_points(g);
  if (!o.shift.empty()) p = hods::digital_shift(p, hods::random_shift(o.s, w, parse_hex_seed(o.shift)));
  hods::write_points(os, p, format);
  r.meta["points"] = p.size();
  return r;
}

Result cmd_matrices(const Options& o, std::ostream& os) {
  Result r;
  const std::size_t rows = o.rows != 0 ? o.rows : 2 * o.m;
  const std::size_t cols = o.cols != 0 ? o.cols : o.m;
  const GeneratingMatrixSet g = build_matrices(o, rows, cols);
  hods::write_matrix_set(os, g);
  json list = json::array();
  for (std::size_t j = 0; j < g.polys.size(); ++j)
    list.push_back({{"j", j + 1},
                    {"p", g.polys[j].to_hex()},
                    {"e", g.polys[j].degree()},
                    {"rows", g.kind == hods::MatrixKind::interlaced ? (rows + 1) / 2 : rows},
                    {"cols", cols},
                    {"kind", "niederreiter"}});
  r.meta["matrices"] = {{"kind", hods::to_string(g.kind)}, {"rows", rows}, {"cols", cols}, {"sources", list}};
  return r;
}

Result cmd_verify(const Options& o, std::ostream& os) {
  Result r;
  const GeneratingMatrixSet g = build_matrices(o, 2 * o.m, o.m);
  const hods::MinimalWeights w = hods::minimal_weights(hods::dual_set_basis(g), {hods::default_budget_bits(), o.threads});
  const std::size_t t_exact = hods::t_from_weights(w, o.m, o.order);
  std::optional<std::size_t> t_bound;
  if (!o.zero_matrices) t_bound = std::min(hods::construction_t_bound(g), o.order == 1 ? o.m : 2 * o.m);
  if (!o.t && !t_bound) throw hods::InvalidInput("--t is required for --zero-matrices");
  const std::size_t t = o.t ? *o.t : *t_bound;
  if (t > (o.order == 1 ? o.m : 2 * o.m)) throw hods::InvalidInput("--t exceeds the largest possible t-value");
  bool pass = t_exact <= t;

  json report = {{"s", o.s},
                 {"m", o.m},
                 {"order", o.order},
                 {"rho1", w.rho1 == hods::kInfiniteWeight ? json("inf") : json(w.rho1)},
                 {"rho2", w.rho2 == hods::kInfiniteWeight ? json("inf") : json(w.rho2)},
                 {"t", t},
                 {"t_exact", t_exact},
                 {"t_construction_bound", t_bound ? json(*t_bound) : json(nullptr)}};
  if (o.order == 2 && o.s <= hods::kMaxOrder2SearchDimension && o.m <= hods::kMaxOrder2SearchLevel) {
    const bool search = hods::verify_order2_net(g, t);
    report["row_search"] = search;
    pass = pass && search;
  }
  report["result"] = pass ? "pass" : "fail";
  os << report.dump(2) << '\n';
  r.code = pass ? kExitOk : kExitCheckFailed;
  return r;
}

Result cmd_dual(const Options& o, std::ostream& os) {
  Result r;
  const GeneratingMatrixSet g = build_matrices(o, 2 * o.m, o.m);
  const hods::DualBasis basis = hods::dual_set_basis(g);
  for (std::size_t j = 0; j < o.s; ++j) os << 'k' << j + 1 << ',';
  os << "mu1,mu2\n";
  std::size_t written = 0;
  for (const auto& e : hods::dual_elements(basis)) {
    if (o.limit != 0 && written == o.limit) break;
    for (auto v : e.k) os << v << ',';
    os << e.mu1 << ',' << e.mu2 << '\n';
    ++written;
  }
  r.meta["dual_rank"] = basis.rank();
  return r;
}

std::string join_index(const std::vector<std::uint64_t>& k) {
  std::string out;
  for (std::size_t j = 0; j < k.size(); ++j) out += (j ? ";" : "") + std::to_string(k[j]);
  return out;
}

std::string rational_text(const Rational& v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

/// Walsh coefficient of delta by sampling the exact local discrepancy at the
/// centres of the 2^-R grid.
Rational midpoint_coefficient(const PointSet& p, const std::vector<std::uint64_t>& l, unsigned r) {
  const std::size_t s = p.dimension();
  const std::uint64_t cells = std::uint64_t{1} << r;
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < s; ++j) total *= cells;
  std::vector<Rational> theta(s);
  Rational sum = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    int sign = 1;
    for (std::size_t j = 0; j < s; ++j) {
      const std::uint64_t cell = c % cells;
      c /= cells;
      theta[j] = Rational(hods::BigInt(2 * cell + 1), hods::BigInt(1) << (r + 1));
      sign *= hods::wal(l[j], hods::DyadicValue{2 * cell + 1, r + 1});
    }
    sum += sign * hods::local_discrepancy_exact(p, theta);
  }
  return sum / Rational(hods::BigInt(total));
}

Result cmd_walsh(const Options& o, std::ostream& os) {
  Result r;
  os << "index,value,expected,pass\n";
  bool all = true;
  auto emit = [&](const std::string& index, const Rational& value, const Rational& expected, bool pass) {
    os << index << ',' << rational_text(value) << ',' << rational_text(expected) << ',' << (pass ? 1 : 0) << '\n';
    all = all && pass;
  };
  if (o.check == "orthogonality") {
    for (std::uint64_t k = 0; k < o.max_index; ++k)
      for (std::uint64_t l = 0; l < o.max_index; ++l) {
        const Rational v = hods::walsh_inner_product(k, l);
        const Rational e(k == l ? 1 : 0);
        emit(std::to_string(k) + ";" + std::to_string(l), v, e, v == e);
      }
  } else if (o.check == "character") {
    const GeneratingMatrixSet g = build_matrices(o, 2 * o.m, o.m);
    for (const auto& e : hods::dual_elements(hods::dual_set_basis(g))) {
      const Rational v = hods::character_sum(g, e.k);
      emit(join_index(e.k), v, Rational(1), v == 1);
    }
    const std::size_t want = o.samples != 0 ? o.samples : 1000;
    std::mt19937_64 rng(o.seed);
    const std::uint64_t mask = hods::low_mask(static_cast<unsigned>(2 * o.m));
    std::vector<std::uint64_t> k(o.s);
    for (std::size_t found = 0, tries = 0; found < want; ++tries) {
      if (tries > 1000 * want) throw hods::InvalidInput("could not draw enough indices outside the dual set");
      for (auto& v : k) v = rng() & mask;
      if (hods::is_dual_member(g, k)) continue;
      const Rational v = hods::character_sum(g, k);
      emit(join_index(k), v, Rational(0), v == 0);
      ++found;
    }
    r.meta["seed"] = o.seed;
  } else if (o.check == "delta-coeff") {
    if (o.s > 2) throw hods::InvalidInput("delta-coeff checks sample the grid and support s <= 2");
    const PointSet p = hods::net_points(build_matrices(o, 2 * o.m, o.m));
    const unsigned res = std::max<unsigned>(o.resolution, p.precision());
    if (res * o.s > 20) throw hods::BudgetExceeded("delta-coeff grid of 2^(R s) cells is limited to 2^20");
    const Rational tol(hods::BigInt(1), hods::BigInt(1) << res);
    if (o.max_index > (std::uint64_t{1} << res)) throw hods::InvalidInput("--max-index exceeds 2^R for the grid");
    std::vector<std::uint64_t> l(o.s, 0);
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < o.s; ++j) total *= o.max_index;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (auto& v : l) {
        v = c % o.max_index;
        c /= o.max_index;
      }
      const Rational v = hods::delta_walsh_coefficient(p, l);
      const Rational e = midpoint_coefficient(p, l, res);
      emit(join_index(l), v, e, boost::multiprecision::abs(v - e) <= tol);
    }
  } else {
    throw hods::InvalidInput("--check must be orthogonality, character or delta-coeff");
  }
  r.code = all ? kExitOk : kExitCheckFailed;
  return r;
}

Result cmd_disc(const Options& o, std::ostream& os) {
  Result r;
  require_q(o, r.meta);
  std::optional<PointSet> p;
  std::string kind;
  double bound = 0;
  std::size_t m = o.m;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw hods::InvalidInput("cannot open " + o.input);
    p = hods::read_points_hex(in);
    kind = "file";
    m = std::max<std::size_t>(1, hods::propagation_level(p->size()));
    bound = p->size() >= 2 ? hods::thm2_bound(p->size(), p->dimension(), o.q) : 0.0;
  } else if (o.propagate) {
    if (o.n_points == 0) throw hods::InvalidInput("--propagate needs --n-points");
    m = hods::propagation_level(o.n_points);
    p = hods::propagation_point_set(hods::interlaced_niederreiter(o.s, 2 * m, m), o.n_points);
    kind = "propagated";
    bound = hods::propagation_bound(o.n_points, o.s);
  } else if (o.n_points != 0) {
    m = std::max<std::size_t>(1, hods::propagation_level(o.n_points));
    p = hods::sequence_points(build_matrices(o, 2 * m, m), o.n_points, static_cast<unsigned>(2 * m));
    kind = "prefix";
    bound = o.n_points >= 2 ? hods::thm2_bound(o.n_points, o.s, o.q) : 0.0;
  } else {
    p = hods::net_points(build_matrices(o, 2 * m, m));
    kind = o.order == 1 ? "order1" : "order2";
    bound = hods::thm2_bound(std::uint64_t{1} << m, o.s, o.q);
  }
  hods::StudyConfig cfg;
  cfg.s = p->dimension();
  cfg.q = o.q;
  cfg.samples = o.samples != 0 ? o.samples : 10000;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.allow_any_q = o.allow_any_q;
  hods::StudyRow row = hods::measure(*p, cfg, m, bound);
  row.kind = kind;
  const std::vector<hods::StudyRow> rows{row};
  hods::write_study_csv(os, rows);
  if (o.q != 2) r.meta["seed"] = o.seed;
  return r;
}

Result cmd_study(const Options& o, std::ostream& os) {
  Result r;
  require_q(o, r.meta);
  hods::StudyConfig cfg;
  cfg.s = o.s;
  cfg.source = hods::parse_study_source(o.source);
  cfg.m_min = o.m_min;
  cfg.m_max = o.m_max;
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.q = o.q;
  cfg.samples = o.samples != 0 ? o.samples : 10000;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.allow_any_q = o.allow_any_q;
  const auto rows = hods::convergence_study(cfg);
  hods::write_study_csv(os, rows);
  if (o.q != 2) r.meta["seed"] = o.seed;
  return r;
}

// ---------------------------------------------------------------------------

json flag_values(const CLI::App* sub) {
  json flags = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h") continue;
    const std::string name = opt->get_name().substr(opt->get_name().find_first_not_of('-'));
    if (opt->count() > 0) {
      const auto& res = opt->results();
      flags[name] = opt->get_expected_max() == 0 ? json(true) : json(res.size() == 1 ? res.front() : "");
    } else {
      flags[name] = opt->get_expected_max() == 0 ? json(false) : json(opt->get_default_str());
    }
  }
  return flags;
}

int run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Higher-order digital sequences: construction, verification and discrepancy studies", "hods"};
  app.set_version_flag("--version", std::string(HODS_VERSION));
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--threads", o.threads, "worker threads (results do not depend on it)")->check(CLI::Range(1U, 256U));
  app.add_option("--out", o.out, "write output here; a <out>.manifest.json is written next to it");
  app.add_option("--manifest", o.manifest, "write the run manifest to this path");
  app.add_option("--replay", o.replay, "re-run the command recorded in a manifest")->check(CLI::ExistingFile);

  auto add_construction = [&](CLI::App* c) {
    c->add_option("--s", o.s, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
    c->add_option("--m", o.m, "net level: 2^m points")->check(CLI::Range(std::size_t{1}, std::size_t{32}));
    c->add_option("--order", o.order, "1: Niederreiter, 2: interlaced Niederreiter")->check(CLI::IsMember({1, 2}));
    c->add_flag("--zero-matrices", o.zero_matrices, "use all-zero generating matrices");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a point set");
  add_construction(gen);
  gen->add_option("--n-points", o.n_points, "first N points of the sequence (or, with --propagate, exactly N points)");
  gen->add_option("--precision", o.precision, "digits per coordinate (default 2m)");
  gen->add_option("--shift", o.shift, "apply a random digital shift from this hex seed");
  gen->add_option("--format", o.format, "csv-decimal or csv-hex")->check(CLI::IsMember({"csv-decimal", "csv-hex"}));
  gen->add_flag("--propagate", o.propagate, "use the propagation rule for N points");

  CLI::App* mats = app.add_subcommand("matrices", "print generating matrices");
  add_construction(mats);
  mats->add_option("--rows", o.rows, "rows (default 2m)");
  mats->add_option("--cols", o.cols, "columns (default m)");

  CLI::App* verify = app.add_subcommand("verify", "certify a t-value through the dual set");
  add_construction(verify);
  verify->add_option("--t", o.t, "candidate t (default: the construction's bound)");

  CLI::App* dual = app.add_subcommand("dual", "list the dual set with weights");
  add_construction(dual);
  dual->add_option("--limit", o.limit, "stop after this many elements (0: all)");

  CLI::App* walsh = app.add_subcommand("walsh", "exact Walsh checks");
  add_construction(walsh);
  walsh->add_option("--check", o.check, "orthogonality, character or delta-coeff")
      ->check(CLI::IsMember({"orthogonality", "character", "delta-coeff"}));
  walsh->add_option("--max-index", o.max_index, "indices below this bound")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20));
  walsh->add_option("--samples", o.samples, "random non-dual indices for the character check (default 1000)");
  walsh->add_option("--seed", o.seed, "seed for random indices");
  walsh->add_option("--resolution", o.resolution, "grid resolution R for delta-coeff")->check(CLI::Range(1U, 20U));

  auto add_q = [&](CLI::App* c) {
    c->add_option("--q", o.q, "Lq exponent; even integers only unless --allow-any-q");
    c->add_flag("--allow-any-q", o.allow_any_q, "accept odd or fractional q (outside the theorems)");
    c->add_option("--samples", o.samples, "Monte-Carlo samples for q != 2 (default 10000)");
    c->add_option("--seed", o.seed, "Monte-Carlo seed");
  };

  CLI::App* disc = app.add_subcommand("disc", "discrepancy of one point set");
  add_construction(disc);
  add_q(disc);
  disc->add_option("--n-points", o.n_points, "first N sequence points, or N propagated points");
  disc->add_flag("--propagate", o.propagate, "use the propagation rule for N points");
  disc->add_option("--in", o.input, "read a csv-hex point file instead")->check(CLI::ExistingFile);

  CLI::App* study = app.add_subcommand("study", "discrepancy against the asymptotic envelope over a sweep");
  study->add_option("--s", o.s, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  study->add_option("--source", o.source, "order1, order2, propagated or prefix")
      ->check(CLI::IsMember({"order1", "order2", "propagated", "prefix"}));
  study->add_option("--m-min", o.m_min, "first net level");
  study->add_option("--m-max", o.m_max, "last net level");
  study->add_option("--n-min", o.n_min, "first N (propagated, prefix)");
  study->add_option("--n-max", o.n_max, "last N (propagated, prefix)");
  add_q(study);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!o.replay.empty()) {
    std::ifstream in(o.replay);
    const json manifest = json::parse(in);
    std::vector<std::string> again{args.front()};
    for (const auto& a : manifest.at("argv")) again.push_back(a.get<std::string>());
    if (!o.out.empty()) {
      std::vector<std::string> rewritten{again.front()};
      for (std::size_t i = 1; i < again.size(); ++i) {
        if (again[i] == "--out" || again[i] == "--manifest") {
          ++i;
          continue;
        }
        if (again[i].rfind("--out=", 0) == 0 || again[i].rfind("--manifest=", 0) == 0) continue;
        rewritten.push_back(again[i]);
      }
      rewritten.push_back("--out");
      rewritten.push_back(o.out);
      again = rewritten;
    }
    return run(again);
  }

  const std::vector<CLI::App*> subs = app.get_subcommands();
  if (subs.empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }
  CLI::App* sub = subs.front();
  const std::string command = sub->get_name();

  std::ostringstream body;
  Result result;
  try {
    if (command == "gen") result = cmd_gen(o, body);
    else if (command == "matrices") result = cmd_matrices(o, body);
    else if (command == "verify") result = cmd_verify(o, body);
    else if (command == "dual") result = cmd_dual(o, body);
    else if (command == "walsh") result = cmd_walsh(o, body);
    else if (command == "disc") result = cmd_disc(o, body);
    else result = cmd_study(o, body);
  } catch (const hods::BudgetExceeded& e) {
    std::cerr << "hods " << command << ": budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const hods::InvalidInput& e) {
    std::cerr << "hods " << command << ": " << e.what() << '\n';
    return kExitUsage;
  }

  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "hods: cannot write " << o.out << '\n';
      return kExitUsage;
    }
    f << body.str();
  }

  const std::string manifest_path = !o.manifest.empty() ? o.manifest : (o.out.empty() ? "" : o.out + ".manifest.json");
  if (!manifest_path.empty()) {
    json m = {{"tool", "hods"},
              {"version", HODS_VERSION},
              {"command", command},
              {"argv", std::vector<std::string>(args.begin() + 1, args.end())},
              {"flags", flag_values(sub)},
              {"threads", o.threads},
              {"budget_bits", hods::default_budget_bits()},
              {"seed", result.meta.contains("seed") ? result.meta["seed"] : json(nullptr)},
              {"output", o.out.empty() ? json(nullptr) : json(o.out)},
              {"exit_code", result.code}};
    for (auto it = result.meta.begin(); it != result.meta.end(); ++it)
      if (it.key() != "seed") m[it.key()] = it.value();
    std::ofstream f(manifest_path, std::ios::binary);
    if (!f) {
      std::cerr << "hods: cannot write " << manifest_path << '\n';
      return kExitUsage;
    }
    f << m.dump(2) << '\n';
  }
  return result.code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc));
  } catch (const hods::BudgetExceeded& e) {
    std::cerr << "hods: budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "hods: " << e.what() << '\n';
    return kExitUsage;
  }
}
