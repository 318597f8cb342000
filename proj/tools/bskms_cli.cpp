// Command-line front end: word arithmetic, state evaluation, phase scans,
// and verification reports, with deterministic plain/json/csv output.
//
// Exit codes: 0 success, 1 verification failure, 2 parse/usage error,
// 3 domain error (invalid parameters, size caps).

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bskms/errors.hpp>
#include <bskms/measure.hpp>
#include <bskms/rep.hpp>
#include <bskms/states.hpp>
#include <bskms/verify.hpp>
#include <bskms/words.hpp>

using namespace bskms;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Complex& z) {
  return fmt(z.real()) + " " + fmt(z.imag());
}

struct Options {
  std::int64_t c = 2;
  std::int64_t d = 3;
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::string measure_path;
  std::int64_t K = 3;
  std::int64_t hmax = 2;
  std::int64_t emax = 4;
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 1;
  std::string format = "plain";

  Params params() const { return Params{c, d}; }
  Measure measure() const {
    if (measure_path.empty()) return Measure::point_mass();
    return load_measure_file(measure_path);
  }
  double beta_or_throw(const char* cmd) const {
    if (std::isnan(beta))
      throw ParseError(std::string(cmd) + ": --beta is required", 0);
    return beta;
  }
  double tol_or(double dflt) const { return std::isnan(tol) ? dflt : tol; }
};

// key/value report rendered as aligned plain text or a json object
class Report {
 public:
  explicit Report(const Options& opt) : json_(opt.format == "json") {}

  void add(const std::string& key, const std::string& value) {
    if (json_)
      obj_[key] = value;
    else
      rows_.emplace_back(key, value);
  }
  void add(const std::string& key, const char* value) {
    add(key, std::string(value));
  }
  void add(const std::string& key, std::int64_t value) {
    if (json_)
      obj_[key] = value;
    else
      rows_.emplace_back(key, std::to_string(value));
  }
  void add(const std::string& key, double value) {
    if (json_)
      obj_[key] = value;
    else
      rows_.emplace_back(key, fmt(value));
  }
  void add(const std::string& key, const Complex& value) {
    if (json_)
      obj_[key] = complex_to_json(value);
    else
      rows_.emplace_back(key, fmt(value));
  }
  void add(const std::string& key, const json& value) {
    if (json_)
      obj_[key] = value;
    else
      rows_.emplace_back(key, value.dump());
  }

  void print() const {
    if (json_) {
      std::cout << obj_.dump(2) << '\n';
      return;
    }
    for (const auto& [k, v] : rows_) std::cout << k << ": " << v << '\n';
  }

 private:
  bool json_;
  json obj_ = json::object();
  std::vector<std::pair<std::string, std::string>> rows_;
};

void describe_word(Report& report, const std::string& prefix, const Word& w) {
  report.add(prefix, format_word(w));
  report.add(prefix + "_height", static_cast<std::int64_t>(w.height()));
  std::ostringstream exps;
  exps << '[';
  for (std::size_t i = 0; i < w.stem_exps.size(); ++i)
    exps << (i ? " " : "") << w.stem_exps[i];
  exps << ']';
  report.add(prefix + "_stem_exponents", exps.str());
  report.add(prefix + "_tail", w.tail.str());
}

int cmd_normalize(const Options& opt, const std::string& text) {
  const Params P = opt.params();
  const Word w = parse_word(P, text);
  Report report(opt);
  report.add("input", text);
  describe_word(report, "normal", w);
  report.add("stem", format_word(stem(w)));
  report.print();
  return 0;
}

int cmd_stem(const Options& opt, const std::string& text) {
  const Params P = opt.params();
  const Word w = parse_word(P, text);
  Report report(opt);
  report.add("input", text);
  report.add("stem", format_word(stem(w)));
  report.add("tail", w.tail.str());
  report.add("height", static_cast<std::int64_t>(w.height()));
  report.print();
  return 0;
}

int cmd_join(const Options& opt, const std::string& xs, const std::string& ys) {
  const Params P = opt.params();
  const Word x = parse_word(P, xs);
  const Word y = parse_word(P, ys);
  const JoinResult jr = join(P, x, y);
  Report report(opt);
  report.add("x", format_word(x));
  report.add("y", format_word(y));
  if (!jr.finite) {
    report.add("join", "infinite");
    report.print();
    return 0;
  }
  report.add("join", format_word(jr.join));
  report.add("x_comp", format_word(jr.x_comp));
  report.add("y_comp", format_word(jr.y_comp));
  report.print();
  return 0;
}

int cmd_kms_eval(const Options& opt, const std::string& xs,
                 const std::string& ys, bool series) {
  const Params P = opt.params();
  const Word x = parse_word(P, xs);
  const Word y = parse_word(P, ys);
  const double beta = opt.beta_or_throw("kms-eval");
  const Measure mu = opt.measure();
  const SpanState state = kms_state(P, beta, mu);

  Report report(opt);
  report.add("x", format_word(x));
  report.add("y", format_word(y));
  report.add("beta", beta);
  report.add("value", state.eval(x, y));
  if (series) {
    if (x.height() == y.height() && x.stem_exps == y.stem_exps) {
      const BigInt diff =
          x.tail >= y.tail ? x.tail - y.tail : y.tail - x.tail;
      const BtSeries s = kms_bt_series(P, beta, mu, diff);
      if (opt.format == "json") {
        json terms = json::array();
        for (const BtTerm& t : s.terms) {
          json jt;
          jt["k"] = t.k;
          jt["moment_index"] = t.index.str();
          jt["value"] = complex_to_json(t.value);
          terms.push_back(jt);
        }
        report.add("series_conjugated", x.tail < y.tail ? "true" : "false");
        report.add("series_terms", terms);
        report.add("series_tail_bound", s.tail_bound);
      } else {
        report.add("series_conjugated", x.tail < y.tail ? "true" : "false");
        for (const BtTerm& t : s.terms)
          report.add("term_k" + std::to_string(t.k),
                     "index " + t.index.str() + " value " + fmt(t.value));
        report.add("series_tail_bound", s.tail_bound);
      }
    } else {
      report.add("series", "empty (orthogonal pair)");
    }
  }
  report.print();
  return 0;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw ParseError("bad number: " + item, 0);
    out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const long long v = std::stoll(item, &pos);
    if (pos != item.size()) throw ParseError("bad integer: " + item, 0);
    out.push_back(v);
  }
  return out;
}

int cmd_phase_scan(const Options& opt, const std::string& betas_text,
                   const std::string& ts_text) {
  const Params P = opt.params();
  const Measure mu = opt.measure();
  const std::vector<double> betas = parse_double_list(betas_text);
  const std::vector<std::int64_t> ts = parse_int_list(ts_text);

  std::cout << "beta,feasible,slack";
  for (const std::int64_t t : ts)
    std::cout << ",psi_t" << t << "_re,psi_t" << t << "_im";
  std::cout << '\n';
  for (const double beta : betas) {
    const PhaseFeasibility pf = phase_feasible(P, beta);
    std::cout << fmt(beta) << ',' << (pf.feasible ? 1 : 0) << ','
              << fmt(pf.slack);
    for (const std::int64_t t : ts) {
      try {
        const Complex v = kms_bt(P, beta, mu, t);
        std::cout << ',' << fmt(v.real()) << ',' << fmt(v.imag());
      } catch (const DomainError&) {
        std::cout << ",,";  // no series value at or below the critical beta
      }
    }
    std::cout << '\n';
  }
  return 0;
}

SpanState build_state(const Options& opt, const std::string& kind,
                      const std::string& xi_text) {
  const Params P = opt.params();
  if (kind == "kms")
    return kms_state(P, opt.beta_or_throw("verify --state kms"),
                     opt.measure());
  if (kind == "critical") return critical_state(P);
  if (kind == "critical-limit") return critical_limit_state(P, opt.measure());
  if (kind == "ground-measure") return ground_state(measure_state(opt.measure()));
  if (kind == "ground-vector") {
    std::vector<Complex> xi;
    for (const double v : parse_double_list(xi_text)) xi.emplace_back(v, 0);
    return ground_state(vector_state(std::move(xi)));
  }
  throw ParseError("unknown state kind: " + kind, 0);
}

void print_check_report(const Options& opt, const CheckReport& report,
                        double tol) {
  if (opt.format == "json") {
    json j;
    j["pairs_checked"] = report.pairs_checked;
    j["quads_checked"] = report.quads_checked;
    j["max_residual"] = report.max_residual;
    j["tolerance"] = tol;
    j["pass"] = report.pass(tol);
    json ws = json::array();
    for (const Witness& w : report.witnesses) {
      json jw;
      jw["what"] = w.what;
      jw["residual"] = w.residual;
      ws.push_back(jw);
    }
    j["witnesses"] = ws;
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << report.to_text();
  std::cout << "tolerance: " << fmt(tol) << '\n';
  std::cout << (report.pass(tol) ? "PASS" : "FAIL") << '\n';
}

int cmd_verify(const Options& opt, const std::string& mode,
               const std::string& state_kind, const std::string& xi_text,
               const std::string& wmodel, std::int64_t wdim, bool dump) {
  const Params P = opt.params();

  if (mode == "relations") {
    WSpec w = wmodel == "shift" ? WSpec(TruncatedShift{wdim})
                                : WSpec(finite_model(opt.measure()).w);
    const TruncRep rep = build_rep(P, opt.K, std::move(w));
    const RelationReport report = check_relations(rep);
    const double tol = opt.tol_or(1e-12);
    if (opt.format == "json") {
      json j;
      j["t1_residual"] = report.t1;
      j["t4_residual"] = report.t4;
      j["t5_residual"] = report.t5;
      j["cuntz_excess"] = report.cuntz;
      j["columns"] = report.columns;
      j["top_level_columns"] = report.top_level_columns;
      j["shift_boundary_columns"] = report.shift_boundary_columns;
      j["tolerance"] = tol;
      j["pass"] = report.pass(tol);
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << report.to_text();
      std::cout << "tolerance: " << fmt(tol) << '\n';
      std::cout << (report.pass(tol) ? "PASS" : "FAIL") << '\n';
    }
    if (dump) {
      std::cout << "U:\n";
      rep_U(rep).dump(std::cout);
      std::cout << "V:\n";
      rep_V(rep).dump(std::cout);
    }
    return report.pass(tol) ? 0 : 1;
  }

  const SpanState state = build_state(opt, state_kind, xi_text);
  const ToeplitzBall ball = make_ball(P, opt.hmax, opt.emax);
  const double tol = opt.tol_or(1e-10);

  CheckReport report;
  if (mode == "charkms") {
    report = verify_charkms(state, ball.words, tol);
  } else if (mode == "full") {
    VerifyOptions vo;
    vo.tol = tol;
    vo.seed = opt.seed;
    const double beta = std::isnan(opt.beta) ? state.beta : opt.beta;
    report = verify_full_kms(P, state, beta, ball.words, vo);
  } else if (mode == "ground") {
    report = verify_ground(state, ball.words, tol);
  } else {
    throw ParseError("unknown mode: " + mode, 0);
  }
  print_check_report(opt, report, tol);
  return report.pass(tol) ? 0 : 1;
}

int cmd_demo_nonuniqueness(const Options& opt) {
  const Params P = opt.params();
  if (P.c % P.d != 0)
    throw DomainError("demo-nonuniqueness: requires d | c");
  const SpanState a = critical_limit_state(P, Measure::haar());
  const SpanState b =
      critical_limit_state(P, Measure::roots_uniform(P.c / P.d));

  std::cout << "t,psi_a,psi_b,abs_diff\n";
  std::int64_t first_diff = -1;
  for (std::int64_t t = 0; t <= 12; ++t) {
    const Complex va = a.eval(bpow(t), Word());
    const Complex vb = b.eval(bpow(t), Word());
    const double diff = std::abs(va - vb);
    if (first_diff < 0 && diff > 0.5) first_diff = t;
    std::cout << t << ',' << fmt(va.real()) << ',' << fmt(vb.real()) << ','
              << fmt(diff) << '\n';
  }
  std::cout << "# two distinct states at beta = ln " << P.d
            << (first_diff >= 0
                    ? "; first difference at t = " + std::to_string(first_diff)
                    : "")
            << '\n';
  return 0;
}

int cmd_recover_moments(const Options& opt, std::int64_t n_max) {
  const Params P = opt.params();
  const double beta = opt.beta_or_throw("recover-moments");
  const Measure mu = opt.measure();
  const SpanState state = kms_state(P, beta, mu);
  const std::vector<Complex> rec = recover_moments(state, P, beta, n_max);

  double max_diff = 0;
  std::cout << "n,true_re,true_im,recovered_re,recovered_im,abs_diff\n";
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const Complex truth = moment(mu, n);
    const Complex got = rec[static_cast<std::size_t>(n)];
    const double diff = std::abs(truth - got);
    max_diff = std::max(max_diff, diff);
    std::cout << n << ',' << fmt(truth.real()) << ',' << fmt(truth.imag())
              << ',' << fmt(got.real()) << ',' << fmt(got.imag()) << ','
              << fmt(diff) << '\n';
  }
  std::cout << "max_abs_diff: " << fmt(max_diff) << '\n';
  return max_diff <= opt.tol_or(1e-9) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz semigroup words, equilibrium states, and checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--c", opt.c, "first relation exponent (b^d a = a b^c)");
  app.add_option("--d", opt.d, "second relation exponent");
  app.add_option("--beta", opt.beta, "inverse temperature");
  app.add_option("--measure", opt.measure_path,
                 "measure file (json; default: point mass at 1)");
  app.add_option("--K", opt.K, "truncation height for representations");
  app.add_option("--hmax", opt.hmax, "word ball height bound");
  app.add_option("--emax", opt.emax, "word ball exponent bound");
  app.add_option("--tol", opt.tol, "tolerance override");
  app.add_option("--seed", opt.seed, "sampling seed");
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"plain", "json", "csv"}));

  std::function<int()> action;

  {
    auto* cmd = app.add_subcommand("normalize", "normal form of a word");
    auto text = std::make_shared<std::string>();
    cmd->add_option("word", *text, "word in letters a, b[^n], e")->required();
    cmd->callback([&, text] {
      action = [&, text] { return cmd_normalize(opt, *text); };
    });
  }
  {
    auto* cmd = app.add_subcommand("stem", "stem, tail, and height of a word");
    auto text = std::make_shared<std::string>();
    cmd->add_option("word", *text)->required();
    cmd->callback([&, text] {
      action = [&, text] { return cmd_stem(opt, *text); };
    });
  }
  {
    auto* cmd = app.add_subcommand("join", "least upper bound of two words");
    auto xs = std::make_shared<std::string>();
    auto ys = std::make_shared<std::string>();
    cmd->add_option("x", *xs)->required();
    cmd->add_option("y", *ys)->required();
    cmd->callback([&, xs, ys] {
      action = [&, xs, ys] { return cmd_join(opt, *xs, *ys); };
    });
  }
  {
    auto* cmd = app.add_subcommand(
        "kms-eval", "equilibrium state value on a spanning pair");
    auto xs = std::make_shared<std::string>();
    auto ys = std::make_shared<std::string>("e");
    auto series = std::make_shared<bool>(false);
    cmd->add_option("x", *xs)->required();
    cmd->add_option("y", *ys);
    cmd->add_flag("--series", *series, "print the moment series terms");
    cmd->callback([&, xs, ys, series] {
      action = [&, xs, ys, series] {
        return cmd_kms_eval(opt, *xs, *ys, *series);
      };
    });
  }
  {
    auto* cmd = app.add_subcommand("phase-scan",
                                   "csv scan of a beta grid (phase boundary)");
    auto betas = std::make_shared<std::string>();
    auto ts = std::make_shared<std::string>("1,2,3");
    cmd->add_option("--betas", *betas, "comma separated beta grid")
        ->required();
    cmd->add_option("--ts", *ts, "comma separated sample exponents");
    cmd->callback([&, betas, ts] {
      action = [&, betas, ts] { return cmd_phase_scan(opt, *betas, *ts); };
    });
  }
  {
    auto* cmd = app.add_subcommand("verify", "run a verification mode");
    auto mode = std::make_shared<std::string>();
    auto state = std::make_shared<std::string>("kms");
    auto xi = std::make_shared<std::string>();
    auto wmodel = std::make_shared<std::string>("diagonal");
    auto wdim = std::make_shared<std::int64_t>(8);
    auto dump = std::make_shared<bool>(false);
    cmd->add_option("--mode", *mode, "charkms | full | ground | relations")
        ->required()
        ->check(CLI::IsMember({"charkms", "full", "ground", "relations"}));
    cmd->add_option("--state", *state,
                    "kms | critical | critical-limit | ground-vector | "
                    "ground-measure")
        ->check(CLI::IsMember({"kms", "critical", "critical-limit",
                               "ground-vector", "ground-measure"}));
    cmd->add_option("--xi", *xi,
                    "comma separated real coefficients (ground-vector)");
    cmd->add_option("--wmodel", *wmodel, "diagonal | shift (relations)")
        ->check(CLI::IsMember({"diagonal", "shift"}));
    cmd->add_option("--wdim", *wdim, "shift model dimension (relations)");
    cmd->add_flag("--dump", *dump,
                  "dump generator matrices as row col re im (relations)");
    cmd->callback([&, mode, state, xi, wmodel, wdim, dump] {
      action = [&, mode, state, xi, wmodel, wdim, dump] {
        return cmd_verify(opt, *mode, *state, *xi, *wmodel, *wdim, *dump);
      };
    });
  }
  {
    auto* cmd = app.add_subcommand(
        "demo-nonuniqueness",
        "two distinct equilibrium states at the critical temperature (d | c)");
    cmd->callback([&] {
      action = [&] { return cmd_demo_nonuniqueness(opt); };
    });
  }
  {
    auto* cmd = app.add_subcommand(
        "recover-moments", "round trip measure moments through state values");
    auto n_max = std::make_shared<std::int64_t>(30);
    cmd->add_option("--nmax", *n_max, "largest moment index");
    cmd->callback([&, n_max] {
      action = [&, n_max] { return cmd_recover_moments(opt, *n_max); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.position << ": " << e.what()
              << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 3;
  } catch (const SizeCapError& e) {
    std::cerr << "size cap exceeded: " << e.what() << '\n';
    return 3;
  }
}
