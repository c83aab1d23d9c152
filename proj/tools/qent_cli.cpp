// qent: figure data, verification suite and a worked example of the
// entropy-increase theorem.
//
// Exit status: 0 all checks pass, 1 invariant violation, 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <qent/qent.hpp>

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

struct Options {
  double work = 10.0;
  double amplitude = 6.0;
  std::size_t level = 2;
  double beta = 2.0;
  std::optional<std::size_t> n_trunc;
  std::optional<std::size_t> m_trunc;
  qent::TimeGrid grid;
  double tail_mass = 1e-12;
  std::uint64_t seed = 42;
  std::size_t trials = 1000;
  std::size_t dim = 6;
  bool unordered = false;
  std::string output;
};

// Writes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw qent::InvalidArgument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

qent::TruncationPolicy policy_from(const Options& o, std::optional<std::size_t> default_cut) {
  qent::TruncationPolicy p;
  p.tail_mass = o.tail_mass;
  if (auto cut = o.m_trunc ? o.m_trunc : default_cut) {
    p = qent::TruncationPolicy::fixed(*cut, o.tail_mass);
  }
  p.validate();
  return p;
}

std::string truncation_comment(const qent::TruncationPolicy& p) {
  if (p.fixed_cut)
    return "m summed over 0.." + std::to_string(*p.fixed_cut) + " (fixed cut), required mass 1 - " +
           qent::csv::format_number(p.tail_mass);
  return "m extended until captured mass >= 1 - " + qent::csv::format_number(p.tail_mass) +
         " (hard cap " + std::to_string(p.hard_cap) + ")";
}

std::string grid_comment(const qent::TimeGrid& g) {
  return "T grid: " + qent::csv::format_number(g.t_min) + " to " + qent::csv::format_number(g.t_max) +
         " step " + qent::csv::format_number(g.t_step);
}

int report_violations(std::size_t count, const char* what) {
  if (count == 0) return kOk;
  std::cerr << "invariant violated: " << what << " (" << count << " rows)\n";
  return kViolation;
}

int cmd_fig1(const Options& o) {
  const std::size_t n_max = o.n_trunc.value_or(40);
  const auto policy = policy_from(o, std::size_t{1000});
  const auto rows = qent::figure1(o.work, n_max, policy);
  Sink sink(o.output);
  qent::csv::Writer w(sink.stream());
  w.comment("fig1: microcanonical expectation of ln(m + 1/2) versus initial level n")
      .comment("work W = " + qent::csv::format_number(o.work) + ", levels n = 0.." + std::to_string(n_max))
      .comment("classical = ln max(n + 1/2, W); quantum = sum_m |a_nm|^2 ln(m + 1/2)")
      .comment(truncation_comment(policy))
      .header({"n", "classical", "quantum"});
  std::size_t bad = 0;
  for (const auto& r : rows) {
    w.row(r.n, r.classical, r.quantum);
    if (r.quantum < std::log(static_cast<double>(r.n) + 0.5) - 1e-12) ++bad;
  }
  return report_violations(bad, "quantum entropy below ln(n + 1/2)");
}

int cmd_fig2(const Options& o) {
  const auto policy = policy_from(o, std::nullopt);
  const auto rows = qent::figure2(o.amplitude, o.level, o.grid.points(), policy);
  Sink sink(o.output);
  qent::csv::Writer w(sink.stream());
  const double phi = static_cast<double>(o.level) + 0.5;
  w.comment("fig2: change of microcanonical entropy versus switching time T, f(t) = L sin(pi t / T)")
      .comment("L = " + qent::csv::format_number(o.amplitude) + ", n = " + std::to_string(o.level) +
               ", Phi = n + 1/2 = " + qent::csv::format_number(phi))
      .comment("classical = ln max(Phi, W) - ln Phi; quantum = <ln(m + 1/2)>_n - ln(n + 1/2)")
      .comment(grid_comment(o.grid))
      .comment(truncation_comment(policy))
      .header({"T", "W", "classical", "quantum"});
  std::size_t bad = 0;
  for (const auto& r : rows) {
    w.row(r.duration, r.work, r.classical, r.quantum);
    if (r.quantum < -1e-9 || r.classical < 0.0) ++bad;
  }
  return report_violations(bad, "negative microcanonical entropy change");
}

int cmd_fig3(const Options& o) {
  const std::size_t n_trunc = o.n_trunc.value_or(100);
  const auto policy = policy_from(o, std::nullopt);
  const auto rows = qent::figure3(o.amplitude, o.beta, n_trunc, o.grid.points(), policy);
  Sink sink(o.output);
  qent::csv::Writer w(sink.stream());
  w.comment("fig3: change of canonical entropy versus switching time T, f(t) = L sin(pi t / T)")
      .comment("L = " + qent::csv::format_number(o.amplitude) + ", beta = " + qent::csv::format_number(o.beta) +
               ", canonical levels n = 0.." + std::to_string(n_trunc))
      .comment("classical = -beta W int_0^1 e^{-beta W x} ln x dx over the density beta e^{-beta Phi}")
      .comment("quantum = (1 - e^{-beta}) sum_n e^{-beta n} [<ln(m + 1/2)>_n - ln(n + 1/2)]")
      .comment("note: a single Phi = n + 1/2 = 5/2 does not apply to this canonical figure; the classical column "
               "averages over all Phi")
      .comment(grid_comment(o.grid))
      .comment(truncation_comment(policy))
      .header({"T", "W", "classical", "quantum", "quantum_tail_bound"});
  std::size_t bad = 0;
  for (const auto& r : rows) {
    w.row(r.duration, r.work, r.classical, r.quantum, r.quantum_tail_bound);
    if (r.classical < 0.0 || r.quantum < 0.0) ++bad;
  }
  return report_violations(bad, "negative canonical entropy change");
}

int cmd_verify(const Options& o) {
  const auto report = qent::run_verification(o.seed, o.trials);
  nlohmann::ordered_json j;
  j["seed"] = o.seed;
  j["trials"] = o.trials;
  j["passed"] = report.all_passed();
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"cases", c.cases},
                      {"failures", c.failures},
                      {"worst", c.worst},
                      {"threshold", c.threshold},
                      {"note", c.note}});
  }
  Sink sink(o.output);
  sink.stream() << j.dump(2) << '\n';
  for (const auto& c : report.checks)
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  return report.all_passed() ? kOk : kViolation;
}

int cmd_theorem_demo(const Options& o) {
  if (o.dim < 2) throw qent::InvalidArgument("--dim must be at least 2");
  auto rng = qent::make_rng(o.seed, 0);
  const auto p = o.unordered ? qent::random_distribution(o.dim, rng)
                             : qent::random_decreasing_distribution(o.dim, rng);
  const auto d = qent::random_unistochastic(o.dim, qent::split_seed(o.seed, 1));
  const auto q = qent::evolve_distribution(p, d);
  const auto r = qent::entropy_change(p, q);

  Sink sink(o.output);
  auto& out = sink.stream();
  char line[512];
  std::snprintf(line, sizeof line, "dim = %zu, seed = %llu, p %s\n\n", o.dim,
                static_cast<unsigned long long>(o.seed),
                p.is_decreasing() ? "decreasing" : "NOT decreasing (exploratory: positivity not guaranteed)");
  out << line;
  out << "   n          p_n         p'_n   sum_{k<=n}(p_k - p'_k)   ln((n+3/2)/(n+1/2))\n";
  for (std::size_t n = 0; n < o.dim; ++n) {
    const double nd = static_cast<double>(n);
    std::snprintf(line, sizeof line, "%4zu  %11.8f  %11.8f  %23.3e  %20.8f\n", n, p[n], q[n],
                  r.cumulative_gaps[n], std::log((nd + 1.5) / (nd + 0.5)));
    out << line;
  }
  std::snprintf(line, sizeof line,
                "\nS_i = %.12f\nS_f = %.12f\ndelta S (direct)   = %.12e\ndelta S (by parts) = %.12e\n"
                "|difference|       = %.3e\nmin partial sum    = %.3e\n",
                r.s_initial, r.s_final, r.delta_direct, r.delta_by_parts,
                std::abs(r.delta_direct - r.delta_by_parts), r.min_cumulative_gap);
  out << line;
  const bool positive = r.delta_direct >= -1e-12 && r.min_cumulative_gap >= -1e-12;
  out << "partial sums and delta S non-negative: " << (positive ? "yes" : "no") << '\n';
  if (p.is_decreasing() && !positive) return kViolation;
  return std::abs(r.delta_direct - r.delta_by_parts) <= 1e-10 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonal entropy ln(N + 1/2) under driven evolution: figure data and verification"};
  app.require_subcommand(1);
  Options o;

  auto add_truncation = [&](CLI::App* sub) {
    sub->add_option("--m-trunc", o.m_trunc, "Sum each transition row over exactly m = 0..M");
    sub->add_option("--tail-mass", o.tail_mass, "Largest probability mass allowed outside a row")
        ->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--t-min", o.grid.t_min, "First switching time")->capture_default_str();
    sub->add_option("--t-max", o.grid.t_max, "Last switching time")->capture_default_str();
    sub->add_option("--t-step", o.grid.t_step, "Switching-time step")->capture_default_str();
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("--output", o.output, "Output file (default stdout)"); };

  auto* fig1 = app.add_subcommand("fig1", "Microcanonical entropy versus initial level n (CSV)");
  fig1->add_option("--work", o.work, "Work W done on the oscillator")->capture_default_str();
  fig1->add_option("--n-trunc", o.n_trunc, "Highest initial level n (default 40)");
  add_truncation(fig1);
  add_output(fig1);
  fig1->footer("Rows are summed over m = 0..1000 unless --m-trunc is given.");

  auto* fig2 = app.add_subcommand("fig2", "Microcanonical entropy change versus switching time (CSV)");
  fig2->add_option("--amplitude", o.amplitude, "Force amplitude L")->capture_default_str();
  fig2->add_option("--level", o.level, "Initial level n")->capture_default_str();
  add_grid(fig2);
  add_truncation(fig2);
  add_output(fig2);

  auto* fig3 = app.add_subcommand("fig3", "Canonical entropy change versus switching time (CSV)");
  fig3->add_option("--amplitude", o.amplitude, "Force amplitude L")->capture_default_str();
  fig3->add_option("--beta", o.beta, "Inverse temperature")->capture_default_str();
  fig3->add_option("--n-trunc", o.n_trunc, "Highest level of the canonical sum (default 100)");
  add_grid(fig3);
  add_truncation(fig3);
  add_output(fig3);

  auto* verify = app.add_subcommand("verify", "Run the invariant suite; JSON report");
  verify->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
  verify->add_option("--trials", o.trials, "Random trials per property")->capture_default_str();
  add_output(verify);

  auto* demo = app.add_subcommand("theorem-demo", "Entropy change on one random doubly stochastic evolution");
  demo->add_option("--dim", o.dim, "Number of levels")->capture_default_str();
  demo->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  demo->add_flag("--unordered", o.unordered, "Draw p without the decreasing ordering");
  add_output(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*fig1) return cmd_fig1(o);
    if (*fig2) return cmd_fig2(o);
    if (*fig3) return cmd_fig3(o);
    if (*verify) return cmd_verify(o);
    if (*demo) return cmd_theorem_demo(o);
  } catch (const qent::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qent::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kConfigError;
}
