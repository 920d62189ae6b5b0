// Command-line front end: construct | spectrum | census | optimize | converge | sweep | replay
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "wernerprep/wernerprep.hpp"

namespace wp = wernerprep;
using json = nlohmann::json;

namespace {

constexpr const char* tool_version = "0.1.0";

struct Settings {
  std::string command;
  int d = 2;
  std::string words = "h,UV";
  std::string alphabet = "construction";
  std::string phase = "global";
  std::string shift = "descending";
  double phi = 0.0;
  double alpha_abs = 0.70710678118654752;
  double alpha_arg = 0.0;
  double beta_arg = 0.0;
  std::string weights;
  std::uint64_t seed = 1;
  long n_ran = 300;
  long n_opt = 50;
  long budget = 1500;
  long n_max = 30;
  std::string grid;
  std::string coordinate = "p1";
  std::string out;
  std::string group = "sl23";
  int size = 2;
  bool ordered = false;
};

json to_json(const Settings& s) {
  return json{{"command", s.command}, {"d", s.d}, {"words", s.words}, {"alphabet", s.alphabet},
              {"phase", s.phase}, {"shift", s.shift}, {"phi", s.phi}, {"alpha-abs", s.alpha_abs},
              {"alpha-arg", s.alpha_arg}, {"beta-arg", s.beta_arg}, {"weights", s.weights},
              {"seed", s.seed}, {"n-ran", s.n_ran}, {"n-opt", s.n_opt}, {"budget", s.budget},
              {"n-max", s.n_max}, {"grid", s.grid}, {"coordinate", s.coordinate}, {"out", s.out},
              {"group", s.group}, {"size", s.size}, {"ordered", s.ordered}};
}

// Arguments that reproduce a settings snapshot.
std::vector<std::string> to_args(const json& cfg, const std::string& out) {
  std::vector<std::string> args{cfg.at("command").get<std::string>()};
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command" || key == "out") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    if (value.is_string()) args.push_back(value.get<std::string>());
    else if (value.is_number_float()) args.push_back(wp::io::fmt(value.get<double>()));
    else args.push_back(value.dump());
  }
  args.push_back("--out");
  args.push_back(out);
  return args;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) wp::fail(wp::ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Collects output files; without --out the primary output goes to stdout.
class Outputs {
public:
  explicit Outputs(std::string base) : base_(std::move(base)) {}

  void primary(const std::string& content) {
    if (base_.empty()) std::cout << content;
    else write(base_, content);
  }
  void secondary(const std::string& suffix, const std::string& content) {
    if (!base_.empty()) write(base_ + suffix, content);
  }
  const json& checksums() const { return sums_; }
  const std::string& base() const { return base_; }

private:
  void write(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) wp::fail(wp::ErrorKind::io, "cannot write '" + path + "'");
    f << content;
    sums_[path] = sha256_hex(content);
  }
  std::string base_;
  json sums_ = json::object();
};

wp::ConstructionOptions construction_options(const Settings& s) {
  wp::ConstructionOptions o;
  if (s.alphabet == "sl23") o.alphabet = wp::Alphabet::sl23;
  else if (s.alphabet != "construction") wp::fail(wp::ErrorKind::domain, "unknown alphabet '" + s.alphabet + "'");
  if (s.phase == "block") o.phase = wp::PhaseConvention::block;
  else if (s.phase != "global") wp::fail(wp::ErrorKind::domain, "unknown phase convention '" + s.phase + "'");
  if (s.shift == "ascending") o.shift = wp::ShiftDirection::ascending;
  else if (s.shift != "descending") wp::fail(wp::ErrorKind::domain, "unknown shift direction '" + s.shift + "'");
  return o;
}

wp::ParamPoint param_point(const Settings& s, std::size_t kraus_count) {
  wp::ParamPoint p{s.phi, s.alpha_abs, s.alpha_arg, s.beta_arg, wp::io::parse_list(s.weights, "--weights")};
  if (s.weights.empty())
    p.weights.assign(kraus_count - 1, 1.0 / static_cast<double>(kraus_count));
  wp::require_feasible(p, kraus_count);
  return p;
}

struct Setup {
  std::vector<wp::GeneratorWord> words;
  wp::ConstructionOptions options;
  wp::ParamPoint params;
  wp::RandomUnitaryOperation ruo;
};

Setup setup(const Settings& s) {
  auto words = wp::parse_words(s.words);
  auto options = construction_options(s);
  auto params = param_point(s, words.size());
  auto ruo = wp::standard_ruo(s.d, words, params, options);
  return {std::move(words), options, std::move(params), std::move(ruo)};
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) wp::fail(wp::ErrorKind::domain, "empty grid");
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo, hi, count;
    std::getline(ss, lo, ':');
    std::getline(ss, hi, ':');
    std::getline(ss, count);
    const double n = wp::io::parse_double(count, "--grid count");
    if (n < 1 || n != std::floor(n)) wp::fail(wp::ErrorKind::domain, "grid count must be a positive integer");
    return wp::linear_grid(wp::io::parse_double(lo, "--grid"), wp::io::parse_double(hi, "--grid"),
                           static_cast<std::size_t>(n));
  }
  auto g = wp::io::parse_list(text, "--grid");
  if (g.empty()) wp::fail(wp::ErrorKind::domain, "empty grid");
  return g;
}

// q8 | sl23 | d2-order192 | closure:<words>@key=value;key=value
wp::FiniteMatrixGroup parse_group(const std::string& spec) {
  if (spec == "q8") return wp::quaternion_group();
  if (spec == "sl23") return wp::sl23_group();
  if (spec == "d2-order192") return wp::order192_group();
  const std::string prefix = "closure:";
  if (spec.rfind(prefix, 0) != 0) wp::fail(wp::ErrorKind::domain, "unknown group '" + spec + "'");
  const std::string body = spec.substr(prefix.size());
  const auto at = body.find('@');
  Settings s;
  s.words = body.substr(0, at);
  if (at != std::string::npos) {
    std::stringstream ss(body.substr(at + 1));
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) wp::fail(wp::ErrorKind::parse, "group parameter '" + item + "' lacks '='");
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "d") s.d = static_cast<int>(wp::io::parse_double(value, key));
      else if (key == "phi") s.phi = wp::io::parse_double(value, key);
      else if (key == "alpha-abs") s.alpha_abs = wp::io::parse_double(value, key);
      else if (key == "alpha-arg") s.alpha_arg = wp::io::parse_double(value, key);
      else if (key == "beta-arg") s.beta_arg = wp::io::parse_double(value, key);
      else if (key == "alphabet") s.alphabet = value;
      else if (key == "phase") s.phase = value;
      else if (key == "shift") s.shift = value;
      else wp::fail(wp::ErrorKind::domain, "unknown group parameter '" + key + "'");
    }
  }
  const auto words = wp::parse_words(s.words);
  const auto bindings = wp::make_bindings(s.d, param_point(s, words.size()), construction_options(s));
  std::vector<wp::ComplexMatrix> gens;
  for (const auto& w : words) gens.push_back(wp::realize_word(w, bindings));
  auto g = wp::closure(gens);
  if (!g) wp::fail(wp::ErrorKind::capacity, "group closure exceeded the element cap");
  if (g->order() > 256) wp::fail(wp::ErrorKind::capacity, "group order " + std::to_string(g->order()) + " exceeds 256");
  return *g;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? wp::io::fmt(*v) : ""; }

void cmd_construct(const Settings& s, Outputs& out) {
  const Setup st = setup(s);
  const auto bindings = wp::make_bindings(s.d, st.params, st.options);
  std::ostringstream os;
  os << "matrix,row,col,re,im\n";
  for (std::size_t i = 0; i < st.words.size(); ++i)
    wp::io::write_matrix(os, "generator" + std::to_string(i + 1), wp::realize_word(st.words[i], bindings));
  for (std::size_t i = 0; i < st.ruo.size(); ++i)
    wp::io::write_matrix(os, "kraus" + std::to_string(i + 1), st.ruo.kraus()[i].unitary);
  out.primary(os.str());
}

void cmd_spectrum(const Settings& s, Outputs& out) {
  const Setup st = setup(s);
  const wp::SpectralReport r = wp::analyze(st.ruo);
  std::ostringstream os;
  os << "re,im,modulus,in_sigma1\n";
  for (const auto& z : r.eigenvalues)
    os << wp::io::fmt(z.real()) << ',' << wp::io::fmt(z.imag()) << ',' << wp::io::fmt(std::abs(z)) << ','
       << (wp::on_unit_circle(z, wp::default_tol) ? 1 : 0) << '\n';
  out.primary(os.str());
  const json summary{{"lambda_max", r.lambda_max},
                     {"penalized_lambda_max", r.sigma1.size() > 2 ? 1.0 : r.lambda_max},
                     {"stationary", r.stationary},
                     {"diagonalizable", wp::to_string(r.diagonalizable)},
                     {"fixed_space_dim", r.fixed_space_dim},
                     {"sigma1_count", r.sigma1.size()},
                     {"eigenvalue_count", r.eigenvalues.size()}};
  out.secondary(".summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump() << '\n';
}

void cmd_census(const Settings& s, Outputs& out) {
  const wp::FiniteMatrixGroup g = parse_group(s.group);
  const auto records = wp::census(g, s.size, s.ordered ? wp::TupleMode::ordered : wp::TupleMode::subsets);
  std::ostringstream os;
  for (int k = 1; k <= s.size; ++k) os << "idx" << k << ',';
  os << "generates,stationary,diagonalizable,optimal_lambda_max\n";
  for (const auto& r : records) {
    for (std::size_t i : r.tuple) os << i << ',';
    os << (r.generates ? "true" : "false") << ',';
    os << (r.stationary ? (*r.stationary ? "true" : "false") : "") << ',';
    os << (r.diagonalizable ? wp::to_string(*r.diagonalizable) : "") << ',';
    os << fmt_opt(r.optimal_lambda_max) << '\n';
  }
  out.primary(os.str());
  const auto sum = wp::summarize(records);
  std::cout << "order=" << g.order() << " tuples=" << sum.tuples << " generating=" << sum.generating
            << " stationary=" << sum.stationary << " nonstationary=" << sum.nonstationary
            << " diagonalizable=" << sum.diagonalizable << " undetermined=" << sum.undetermined << '\n';
}

wp::OptimizationProblem problem_of(const Settings& s, const Setup& st) {
  wp::OptimizationProblem prob;
  prob.d = s.d;
  prob.words = st.words;
  prob.options = st.options;
  prob.base = st.params;
  return prob;
}

void cmd_optimize(const Settings& s, Outputs& out) {
  const Setup st = setup(s);
  const auto prob = problem_of(s, st);
  const auto res = wp::multistart(prob, s.n_ran, s.n_opt, s.seed, s.budget);
  const auto& p = res.best_point;
  std::ostringstream os;
  os << "d,words,lambda_max,phi,alpha_abs,alpha_arg,beta_arg";
  const std::size_t cols = std::max<std::size_t>(2, p.weights.size());
  for (std::size_t i = 1; i <= cols; ++i) os << ",p" << i;
  os << '\n' << s.d << ",\"" << wp::words_text(st.words) << "\"," << wp::io::fmt(res.best_lambda_max) << ','
     << wp::io::fmt(p.phi) << ',' << wp::io::fmt(p.alpha_abs) << ',' << wp::io::fmt(p.alpha_arg) << ','
     << wp::io::fmt(p.beta_arg);
  for (std::size_t i = 0; i < cols; ++i) os << ',' << (i < p.weights.size() ? wp::io::fmt(p.weights[i]) : "");
  os << '\n';
  out.primary(os.str());
  std::ostringstream hist;
  hist << "restart,seed,best_sample,local_value,evaluations\n";
  for (std::size_t i = 0; i < res.history.size(); ++i) {
    const auto& h = res.history[i];
    hist << i << ',' << h.seed << ',' << wp::io::fmt(h.best_sample) << ',' << wp::io::fmt(h.local_value) << ','
         << h.evaluations << '\n';
  }
  out.secondary(".history.csv", hist.str());
}

void cmd_converge(const Settings& s, Outputs& out) {
  const Setup st = setup(s);
  const auto report = wp::analyze(st.ruo);
  if (!report.stationary)
    wp::fail(wp::ErrorKind::domain, "configuration is not asymptotically stationary (sigma1 has "
                                        + std::to_string(report.sigma1.size()) + " eigenvalues)");
  const auto dist = wp::distance_series(st.ruo, s.n_max);
  std::ostringstream os;
  os << "n,distance,bound\n";
  for (std::size_t n = 0; n < dist.size(); ++n)
    os << n << ',' << wp::io::fmt(dist[n]) << ','
       << wp::io::fmt(wp::convergence_bound(s.d, report.lambda_max, static_cast<long>(n))) << '\n';
  out.primary(os.str());
}

void cmd_sweep(const Settings& s, Outputs& out) {
  const Setup st = setup(s);
  const auto prob = problem_of(s, st);
  const auto grid = parse_grid(s.grid);
  std::ostringstream os;
  const auto comma = s.coordinate.find(',');
  if (comma == std::string::npos) {
    const auto c = wp::parse_coordinate(s.coordinate, prob);
    os << c.name << ",lambda_max\n";
    for (const auto& pt : wp::sweep(prob, c, grid, st.params))
      os << wp::io::fmt(pt.value) << ',' << wp::io::fmt(pt.lambda_max) << '\n';
  } else {
    const auto a = wp::parse_coordinate(s.coordinate.substr(0, comma), prob);
    const auto b = wp::parse_coordinate(s.coordinate.substr(comma + 1), prob);
    os << a.name << ',' << b.name << ",lambda_max\n";
    for (const auto& pt : wp::sweep2(prob, a, b, grid, grid, st.params))
      os << wp::io::fmt(pt.first) << ',' << wp::io::fmt(pt.second) << ',' << wp::io::fmt(pt.lambda_max) << '\n';
  }
  out.primary(os.str());
}

void write_manifest(const Settings& s, const std::vector<std::string>& argv, const Outputs& out,
                    double seconds, const std::string& started) {
  if (out.base().empty()) return;
  const json manifest{{"tool", "wernerprep"},
                      {"version", tool_version},
                      {"command_line", argv},
                      {"config", to_json(s)},
                      {"seed", s.seed},
                      {"started_utc", started},
                      {"wall_clock_seconds", seconds},
                      {"outputs", out.checksums()}};
  std::ofstream f(out.base() + ".manifest.json");
  if (!f) wp::fail(wp::ErrorKind::io, "cannot write manifest");
  f << manifest.dump(2) << '\n';
}

int run(std::vector<std::string> argv);

// Re-runs a manifest's configuration into <out>.replay and compares checksums.
int cmd_replay(const std::string& manifest_path) {
  const json m = json::parse(read_file(manifest_path));
  const json& cfg = m.at("config");
  const std::string base = cfg.at("out").get<std::string>();
  const std::string fresh = base + ".replay";
  std::vector<std::string> argv{"wernerprep"};
  for (auto& a : to_args(cfg, fresh)) argv.push_back(a);
  if (const int rc = run(argv); rc != 0) return rc;
  bool same = true;
  for (const auto& [path, sum] : m.at("outputs").items()) {
    const std::string replayed = fresh + path.substr(base.size());
    const bool ok = sha256_hex(read_file(replayed)) == sum.get<std::string>();
    std::cout << (ok ? "match " : "MISMATCH ") << path << '\n';
    same = same && ok;
  }
  return same ? 0 : 1;
}

int exit_code(wp::ErrorKind k) { return 10 + static_cast<int>(k); }

int run(std::vector<std::string> argv) {
  CLI::App app{"Random unitary operations that prepare Werner states: construction, spectra, censuses, optimization"};
  app.set_config("--params", "", "Config file of 'key = value' lines (keys mirror flags)");
  app.get_config_formatter_base()->arrayDelimiter('\x1f');
  app.require_subcommand(1);

  Settings s;
  app.add_option("--d", s.d, "Subsystem dimension");
  app.add_option("--words", s.words, "Comma separated generator words over h, U, V");
  app.add_option("--alphabet", s.alphabet, "construction | sl23");
  app.add_option("--phase", s.phase, "global | block");
  app.add_option("--shift", s.shift, "descending | ascending");
  app.add_option("--phi", s.phi, "Phase phi (radians)");
  app.add_option("--alpha-abs", s.alpha_abs, "|alpha|");
  app.add_option("--alpha-arg", s.alpha_arg, "arg alpha (radians)");
  app.add_option("--beta-arg", s.beta_arg, "arg beta (radians)");
  app.add_option("--weights", s.weights, "p1,...,p_{k-1}; default equal weights");
  app.add_option("--seed", s.seed, "Master seed");
  app.add_option("--n-ran", s.n_ran, "Random samples per repetition");
  app.add_option("--n-opt", s.n_opt, "Repetitions");
  app.add_option("--budget", s.budget, "Objective evaluations per local search");
  app.add_option("--n-max", s.n_max, "Largest iteration count");
  app.add_option("--grid", s.grid, "lo:hi:count or a comma list");
  app.add_option("--coordinate", s.coordinate, "phi, alpha-abs, alpha-arg, beta-arg, p1, ... (two joined by ',')");
  app.add_option("--out", s.out, "Output file; a manifest is written next to it");
  app.add_option("--group", s.group, "q8 | sl23 | d2-order192 | closure:<words>@key=value;...");
  app.add_option("--size", s.size, "Tuple size for census");
  app.add_flag("--ordered", s.ordered, "Census over ordered tuples instead of subsets");

  std::string manifest;
  const std::pair<const char*, const char*> commands[]{
    {"construct", "Print the Kraus unitaries and lifted superoperator"},
    {"spectrum", "Eigenvalues, lambda_max, stationarity and Werner checks"},
    {"census", "Enumerate tuples of a finite group"},
    {"optimize", "Multistart minimization of lambda_max"},
    {"converge", "Distance to the limit against the spectral bound"},
    {"sweep", "lambda_max along one or two parameter coordinates"},
    {"replay", "Rerun a manifest and compare output checksums"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (std::string(name) == "replay") sub->add_option("--manifest", manifest, "Run manifest")->required();
  }

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  s.command = app.get_subcommands().front()->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  const std::time_t now = std::time(nullptr);
  char started[32];
  std::strftime(started, sizeof started, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  try {
    if (s.command == "replay") return cmd_replay(manifest);
    Outputs out(s.out);
    if (s.command == "construct") cmd_construct(s, out);
    else if (s.command == "spectrum") cmd_spectrum(s, out);
    else if (s.command == "census") cmd_census(s, out);
    else if (s.command == "optimize") cmd_optimize(s, out);
    else if (s.command == "converge") cmd_converge(s, out);
    else if (s.command == "sweep") cmd_sweep(s, out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(s, argv, out, secs, started);
  } catch (const wp::Error& e) {
    std::cerr << "error[" << wp::category(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return exit_code(wp::ErrorKind::io);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}
