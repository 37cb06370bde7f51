#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "henon/deck_group.hpp"
#include "henon/render.hpp"
#include "henon/verify.hpp"

namespace {

using henon::Complex;

// accepts "-1", "1e-3", "0.1i", "0.5+0.1i", "1-2i"
Complex parse_complex(const std::string& s) {
  std::size_t pos = 0;
  auto read_num = [&]() {
    std::size_t used = 0;
    const double v = std::stod(s.substr(pos), &used);
    pos += used;
    return v;
  };
  double re = 0, im = 0;
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s == "i") return {0, 1};
  const double first = read_num();
  if (pos < s.size() && s[pos] == 'i') {
    im = first;
    ++pos;
  } else {
    re = first;
    if (pos < s.size()) {
      const double second = read_num();
      if (pos >= s.size() || s[pos] != 'i')
        throw std::invalid_argument("bad complex literal: " + s);
      im = second;
      ++pos;
    }
  }
  if (pos != s.size()) throw std::invalid_argument("bad complex literal: " + s);
  return {re, im};
}

struct CommonConfig {
  std::string c_str = "0.1i";
  std::string a_str = "0.05";
  std::string triv = "std";
  int n = 1024;
  std::string out = ".";
  int workers = 0;
  unsigned seed = 20240101;
  bool over_a = false;

  Complex c() const { return parse_complex(c_str); }
  Complex a() const { return parse_complex(a_str); }
  henon::Trivialization trivialization() const {
    return triv == "norm" ? henon::Trivialization::BoettcherSquared
                          : henon::Trivialization::Standard;
  }
};

// config file supplies defaults; flags given on the command line win
void load_config_file(const std::string& path, CommonConfig& cfg,
                      const CLI::App* cmd) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  auto overridden = [&](const std::string& flag) {
    return cmd->count(flag) > 0;
  };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "bad line: " + line);
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "c") { if (!overridden("--c")) cfg.c_str = val; }
    else if (key == "a") { if (!overridden("--a")) cfg.a_str = val; }
    else if (key == "triv") { if (!overridden("--triv")) cfg.triv = val; }
    else if (key == "n") { if (!overridden("--n")) cfg.n = std::stoi(val); }
    else if (key == "out") { if (!overridden("--out")) cfg.out = val; }
    else if (key == "workers") {
      if (!overridden("--workers")) cfg.workers = std::stoi(val);
    } else if (key == "seed") {
      if (!overridden("--seed")) cfg.seed = unsigned(std::stoul(val));
    } else if (key == "over_a") {
      if (!overridden("--over-a")) cfg.over_a = (val == "1" || val == "true");
    } else {
      throw CLI::ValidationError("--config", "unknown key: " + key);
    }
  }
}

void add_common(CLI::App* cmd, CommonConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "key=value config file");
  cmd->add_option("--c", cfg.c_str, "polynomial parameter c (complex)");
  cmd->add_option("--a", cfg.a_str, "Jacobian a (complex)");
  cmd->add_option("--triv", cfg.triv, "trivialization: std | norm")
      ->check(CLI::IsMember({"std", "norm"}));
  cmd->add_option("--n", cfg.n, "number of angles (power of two)");
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = auto)");
  cmd->add_option("--seed", cfg.seed, "random seed for property sweeps");
  cmd->add_flag("--over-a", cfg.over_a, "plot alpha/a instead of alpha");
}

void echo_config(const CommonConfig& cfg) {
  std::printf("config.c=%s\n", cfg.c_str.c_str());
  std::printf("config.a=%s\n", cfg.a_str.c_str());
  std::printf("config.triv=%s\n", cfg.triv.c_str());
  std::printf("config.n=%d\n", cfg.n);
  std::printf("config.workers=%d\n", cfg.workers);
  std::printf("config.seed=%u\n", cfg.seed);
}

int check_n(int n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    std::fprintf(stderr, "error: --n must be a power of two >= 2, got %d\n", n);
    return 2;
  }
  return 0;
}

henon::AlphaCurve make_curve(const CommonConfig& cfg) {
  const Complex a = cfg.a();
  if (a == Complex(0.0)) {
    // degenerate Jacobian: draw the a->0 limit of alpha/a
    const henon::BoettcherContext ctx = henon::BoettcherContext::make(cfg.c());
    return henon::limit_alpha_curve(ctx, cfg.n, cfg.trivialization());
  }
  henon::CocycleSettings s;
  s.workers = cfg.workers;
  henon::CocycleEngine engine(henon::HenonParams::make(cfg.c(), a), s);
  return henon::compute_alpha_curve(engine, cfg.n, cfg.trivialization(),
                                    cfg.over_a);
}

int run_render_alpha(const CommonConfig& cfg) {
  if (int rc = check_n(cfg.n)) return rc;
  std::filesystem::create_directories(cfg.out);
  const henon::AlphaCurve curve = make_curve(cfg);
  const std::string csv = cfg.out + "/alpha.csv";
  const std::string png = cfg.out + "/alpha.png";
  henon::write_alpha_csv(curve, csv);
  henon::render_plane_curve(curve, png);
  echo_config(cfg);
  std::printf("render_alpha.csv=%s\n", csv.c_str());
  std::printf("render_alpha.png=%s\n", png.c_str());
  return 0;
}

int run_render_mod_arg(const CommonConfig& cfg) {
  if (int rc = check_n(cfg.n)) return rc;
  std::filesystem::create_directories(cfg.out);
  const henon::AlphaCurve curve = make_curve(cfg);
  const std::string csv = cfg.out + "/mod_arg.csv";
  const std::string abs_png = cfg.out + "/abs.png";
  const std::string arg_png = cfg.out + "/arg.png";
  henon::write_alpha_csv(curve, csv);
  henon::render_graph(curve, henon::GraphField::Abs, abs_png);
  henon::render_graph(curve, henon::GraphField::ArgTurns, arg_png);
  echo_config(cfg);
  std::printf("render_mod_arg.csv=%s\n", csv.c_str());
  std::printf("render_mod_arg.abs_png=%s\n", abs_png.c_str());
  std::printf("render_mod_arg.arg_png=%s\n", arg_png.c_str());
  return 0;
}

int run_verify(const CommonConfig& cfg, const std::string& suite, bool strict) {
  if (int rc = check_n(cfg.n)) return rc;
  henon::VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.workers = cfg.workers;
  echo_config(cfg);
  henon::Checks checks;
  try {
    checks = henon::run_suites(suite, opt);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  bool hard_fail = false;
  for (const henon::CheckResult& c : checks) {
    std::printf("%s.measured=%.17g\n", c.key.c_str(), c.measured);
    std::printf("%s.threshold=%.17g\n", c.key.c_str(), c.threshold);
    std::printf("%s.pass=%d\n", c.key.c_str(), c.pass ? 1 : 0);
    if (c.soft) std::printf("%s.soft=1\n", c.key.c_str());
    if (!c.note.empty())
      std::printf("%s.note=%s\n", c.key.c_str(), c.note.c_str());
    if (!c.pass && (!c.soft || strict)) hard_fail = true;
    if (!c.pass && c.soft && !strict)
      std::printf("%s.warning=soft check failed\n", c.key.c_str());
  }
  std::printf("verify.hard_fail=%d\n", hard_fail ? 1 : 0);
  return hard_fail ? 1 : 0;
}

int run_constants(const CommonConfig& cfg) {
  if (int rc = check_n(cfg.n)) return rc;
  henon::CocycleSettings s;
  s.workers = cfg.workers;
  henon::CocycleEngine engine(henon::HenonParams::make(cfg.c(), cfg.a()), s);
  const henon::GroupConstants gc = henon::compute_constants(engine, cfg.n);
  echo_config(cfg);
  std::printf("constants.delta=%.17g\n", gc.delta);
  std::printf("constants.sup_alpha_over_a=%.17g\n", gc.sup_alpha_over_a);
  std::printf("constants.inf_gap_over_a=%.17g\n", gc.inf_gap_over_a);
  std::printf("constants.sup_bound_ok=%d\n", gc.sup_bound_ok ? 1 : 0);
  std::printf("constants.gap_bound_ok=%d\n", gc.gap_bound_ok ? 1 : 0);
  std::printf("constants.delta_prime=%.17g\n", gc.delta_prime);
  std::printf("constants.delta_dprime=%.17g\n", gc.delta_dprime);
  std::printf("constants.a0=%.17g\n", gc.a0);
  try {
    std::printf("constants.k0_at_z0.3=%d\n", gc.k0(0.3));
  } catch (const henon::Error& e) {
    std::printf("constants.k0_at_z0.3=unavailable (%s)\n", e.what());
  }
  return 0;
}

int run_p_lambda(const CommonConfig& cfg, const std::string& lambda_str) {
  const Complex lambda = parse_complex(lambda_str);
  const Complex a = cfg.a();
  const henon::HenonParams h = henon::p_lambda_params(lambda, a);
  std::printf("p_lambda.lambda=%.17g%+.17gi\n", lambda.real(), lambda.imag());
  std::printf("p_lambda.a=%.17g%+.17gi\n", a.real(), a.imag());
  std::printf("p_lambda.c=%.17g%+.17gi\n", h.c.real(), h.c.imag());
  const Complex disc = std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * h.c);
  int idx = 0;
  for (const Complex x : {(1.0 + a + disc) / 2.0, (1.0 + a - disc) / 2.0}) {
    const auto [small, big] =
        henon::eigenvalues2(henon::derivative(h, henon::Point2(x, x)));
    std::printf("p_lambda.fixed%d.x=%.17g%+.17gi\n", idx, x.real(), x.imag());
    std::printf("p_lambda.fixed%d.eigen_small=%.17g%+.17gi\n", idx,
                small.real(), small.imag());
    std::printf("p_lambda.fixed%d.eigen_large=%.17g%+.17gi\n", idx, big.real(),
                big.imag());
    ++idx;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic Henon map invariants: alpha cocycle, deck group, "
               "verification suites"};
  app.require_subcommand(1);

  CommonConfig cfg;
  std::string config_path, suite = "all", lambda_str = "1";
  bool strict = false;

  CLI::App* ra = app.add_subcommand("render-alpha", "CSV + PNG of alpha on S1");
  CLI::App* rm = app.add_subcommand("render-mod-arg",
                                    "CSV + |alpha| and arg alpha graphs");
  CLI::App* ve = app.add_subcommand("verify", "run verification suites");
  CLI::App* co = app.add_subcommand("constants", "print group growth constants");
  CLI::App* pl = app.add_subcommand("p-lambda",
                                    "parameters on the curve P_lambda");
  for (CLI::App* cmd : {ra, rm, ve, co, pl}) add_common(cmd, cfg, config_path);
  ve->add_option("--suite", suite, "suite name or 'all'");
  ve->add_flag("--strict", strict, "soft failures become hard failures");
  pl->add_option("--lambda", lambda_str, "eigenvalue lambda (complex)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) load_config_file(config_path, cfg, active);

    if (ra->parsed()) return run_render_alpha(cfg);
    if (rm->parsed()) return run_render_mod_arg(cfg);
    if (ve->parsed()) return run_verify(cfg, suite, strict);
    if (co->parsed()) return run_constants(cfg);
    if (pl->parsed()) return run_p_lambda(cfg, lambda_str);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
