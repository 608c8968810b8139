#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lcpp/data_io.hpp"
#include "lcpp/dual_bounds.hpp"
#include "lcpp/kkt.hpp"
#include "lcpp/reference.hpp"
#include "lcpp/solver.hpp"

using json = nlohmann::ordered_json;
using namespace lcpp;

namespace {

constexpr const char* kVersion = "lcpp 0.1.0";

std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

struct PenaltyFlags {
  std::string family = "mcp";
  double lambda = 2.0;
  double theta = 0.25;
  double p = -1.0;
  double eps = 0.1;
};

void add_penalty_flags(CLI::App* cmd, PenaltyFlags& f) {
  cmd->add_option("--penalty", f.family,
                  "penalty family: mcp|scad|exp|log|lp-frac|lp-neg")
      ->default_val("mcp");
  cmd->add_option("--lambda", f.lambda, "penalty lambda (mcp/scad/exp)")
      ->default_val(2.0);
  cmd->add_option("--theta", f.theta, "penalty shape theta")->default_val(0.25);
  cmd->add_option("--p", f.p, "lp-neg exponent (p < 0)")->default_val(-1.0);
  cmd->add_option("--eps", f.eps, "lp-frac smoothing eps")->default_val(0.1);
}

PenaltySpec build_penalty(const PenaltyFlags& f) {
  switch (family_from_name(f.family)) {
    case PenaltyFamily::Mcp: return make_mcp(f.lambda, f.theta);
    case PenaltyFamily::Scad: return make_scad(f.lambda, f.theta);
    case PenaltyFamily::Exp: return make_exp(f.lambda);
    case PenaltyFamily::Log: return make_log(f.theta);
    case PenaltyFamily::LpFrac: return make_lp_frac(f.theta, f.eps);
    case PenaltyFamily::LpNeg: return make_lp_neg(f.p, f.theta);
  }
  throw config_error("unknown penalty family");
}

json penalty_json(const PenaltyFlags& f, const PenaltySpec& pen) {
  json j;
  j["family"] = f.family;
  const auto c = constants(pen);
  switch (pen.family) {
    case PenaltyFamily::Mcp:
    case PenaltyFamily::Scad:
      j["lambda"] = pen.lambda_user;
      j["theta"] = pen.theta;
      break;
    case PenaltyFamily::Exp:
      j["lambda"] = pen.lambda_user;
      break;
    case PenaltyFamily::Log:
      j["theta"] = pen.theta;
      break;
    case PenaltyFamily::LpFrac:
      j["theta"] = pen.theta;
      j["eps"] = pen.eps;
      break;
    case PenaltyFamily::LpNeg:
      j["p"] = pen.p;
      j["theta"] = pen.theta;
      break;
  }
  j["lambda_eff"] = c.lambda_eff;
  j["lip_h"] = c.lip_h;
  if (c.saturation) j["saturation"] = *c.saturation;
  return j;
}

// "0.05d" multiplies by the feature dimension
double parse_eta(const std::string& s, std::size_t d) {
  std::string body = s;
  bool scaled = false;
  if (!body.empty() && body.back() == 'd') {
    body.pop_back();
    scaled = true;
  }
  char* end = nullptr;
  const double v = std::strtod(body.c_str(), &end);
  if (end != body.c_str() + body.size() || body.empty())
    throw config_error("cannot parse level '" + s + "'");
  return scaled ? v * static_cast<double>(d) : v;
}

Dataset load_data(const std::string& path, const std::string& format,
                  std::size_t dim) {
  std::string fmt = format;
  if (fmt == "auto")
    fmt = path.size() > 4 && path.substr(path.size() - 4) == ".csv" ? "csv" : "libsvm";
  if (fmt == "csv") return load_csv(path);
  if (fmt == "libsvm") return load_libsvm(path, dim);
  throw config_error("unknown data format '" + format + "'");
}

struct SolveFlags {
  std::string data;
  std::string format = "auto";
  std::size_t dim = 0;
  std::string loss = "logistic";
  PenaltyFlags pen;
  std::string eta;
  std::string eta0 = "half";
  double gamma = 1e-4;
  int outer_iters = 1000;
  std::string inner = "bb";
  int inner_iters = 10;
  double inner_tol = 1e-5;
  std::size_t batch = 1;
  std::uint64_t seed = 0;
  int repeats = 1;
  double outer_tol = 0.0;
  double level_tol = 0.0;
  double dual_bound_B = 0.0;
  bool no_diagnostics = false;
  bool inner_trace = false;
  std::string trace_path;
  std::string report_path;
  std::string solution_path;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--data", f.data, "dataset path (libsvm text or csv)")->required();
  cmd->add_option("--format", f.format, "data format: auto|libsvm|csv")->default_val("auto");
  cmd->add_option("--dim", f.dim, "feature dimension override for libsvm");
  cmd->add_option("--loss", f.loss, "loss: logistic|squared")->default_val("logistic");
  add_penalty_flags(cmd, f.pen);
  cmd->add_option("--eta", f.eta, "constraint level; a trailing 'd' scales by the dimension, e.g. 0.05d")
      ->required();
  cmd->add_option("--eta0", f.eta0,
                  "initial level: number, 'half', 'auto-scad' or 'auto-mcp'")
      ->default_val("half");
  cmd->add_option("--gamma", f.gamma, "proximal weight")->default_val(1e-4);
  cmd->add_option("--outer-iters", f.outer_iters, "outer iteration count")->default_val(1000);
  cmd->add_option("--inner", f.inner, "inner solver: bb|acsa|sgd")->default_val("bb");
  cmd->add_option("--inner-iters", f.inner_iters, "inner iteration cap (bb) or budget (acsa/sgd)")
      ->default_val(10);
  cmd->add_option("--inner-tol", f.inner_tol, "inner relative-change tolerance")->default_val(1e-5);
  cmd->add_option("--batch", f.batch, "minibatch size for acsa/sgd (0 = full batch)")
      ->default_val(1);
  cmd->add_option("--seed", f.seed, "run seed")->default_val(0);
  cmd->add_option("--repeats", f.repeats, "repeat stochastic runs and report the mean")
      ->default_val(1);
  cmd->add_option("--outer-tol", f.outer_tol, "early-exit relative-change tolerance (0 = off)");
  cmd->add_option("--level-tol", f.level_tol, "early-exit level gap");
  cmd->add_option("--dual-bound-B", f.dual_bound_B, "dual bound constant for diagnostics");
  cmd->add_flag("--no-diagnostics", f.no_diagnostics, "skip per-iteration KKT residuals");
  cmd->add_flag("--inner-trace", f.inner_trace,
                "record per-inner-iteration subproblem values in the json report");
  cmd->add_option("--trace", f.trace_path, "trace csv output");
  cmd->add_option("--json-report", f.report_path, "json report output");
  cmd->add_option("--solution", f.solution_path, "solution json output");
}

// The objective keeps a pointer to the dataset member, so instances are
// resolved in place and never copied or moved afterwards.
struct ResolvedSolve {
  Dataset data;
  Objective obj;
  PenaltySpec pen;
  LcppConfig cfg;
  double eta0_guarantee = 0.0;
  ResolvedSolve() = default;
  ResolvedSolve(const ResolvedSolve&) = delete;
  ResolvedSolve& operator=(const ResolvedSolve&) = delete;
};

void resolve(const SolveFlags& f, ResolvedSolve& r) {
  r.data = load_data(f.data, f.format, f.dim);
  if (f.loss == "logistic") {
    r.obj = make_logistic(r.data);
  } else if (f.loss == "squared") {
    r.obj = make_squared(r.data);
  } else {
    throw config_error("unknown loss '" + f.loss + "'");
  }
  r.pen = build_penalty(f.pen);

  LcppConfig& cfg = r.cfg;
  cfg.eta = parse_eta(f.eta, r.data.features);
  if (f.eta0 == "half") {
    cfg.eta0 = cfg.eta / 2.0;
  } else if (f.eta0 == "auto-scad") {
    const auto c = eta0_auto_scad(r.pen, cfg.eta);
    cfg.eta0 = c.eta0;
    r.eta0_guarantee = c.denom_guarantee;
  } else if (f.eta0 == "auto-mcp") {
    const auto c = eta0_auto_mcp(r.pen, cfg.eta);
    cfg.eta0 = c.eta0;
    r.eta0_guarantee = c.denom_guarantee;
  } else {
    cfg.eta0 = parse_eta(f.eta0, r.data.features);
  }
  cfg.gamma = f.gamma;
  cfg.outer_iters = f.outer_iters;
  cfg.seed = f.seed;
  cfg.outer_tol = f.outer_tol;
  cfg.level_tol = f.level_tol;
  cfg.diagnostics = !f.no_diagnostics;
  cfg.inner_trace = f.inner_trace;
  if (f.dual_bound_B > 0.0) cfg.dual_bound_B = f.dual_bound_B;

  if (f.inner == "bb") {
    cfg.inner = InnerSolver::Bb;
    cfg.bb.max_iters = f.inner_iters;
    cfg.bb.tol = f.inner_tol;
  } else if (f.inner == "acsa") {
    cfg.inner = InnerSolver::Acsa;
    cfg.acsa.iters = f.inner_iters;
    cfg.acsa.batch = f.batch;
    cfg.acsa.outer_K = f.outer_iters;
  } else if (f.inner == "sgd") {
    cfg.inner = InnerSolver::Sgd;
    cfg.sgd.iters = f.inner_iters;
    cfg.sgd.batch = f.batch;
  } else {
    throw config_error("unknown inner solver '" + f.inner + "'");
  }
}

json manifest_json(const SolveFlags& f, const ResolvedSolve& r, bool with_time) {
  json m;
  m["tool"] = kVersion;
  m["subcommand"] = "solve";
  m["data"] = {{"path", f.data},
               {"hash", fnv1a_file(f.data)},
               {"rows", r.data.rows},
               {"features", r.data.features}};
  m["loss"] = f.loss;
  m["penalty"] = penalty_json(f.pen, r.pen);
  m["eta"] = r.cfg.eta;
  m["eta0"] = r.cfg.eta0;
  m["eta0_mode"] = f.eta0;
  m["gamma"] = r.cfg.gamma;
  m["outer_iters"] = r.cfg.outer_iters;
  m["inner"] = f.inner;
  m["inner_iters"] = f.inner_iters;
  m["inner_tol"] = f.inner_tol;
  m["batch"] = f.batch;
  m["seed"] = f.seed;
  m["repeats"] = f.repeats;
  m["outer_tol"] = f.outer_tol;
  m["level_tol"] = f.level_tol;
  m["diagnostics"] = !f.no_diagnostics;
  m["inner_trace"] = f.inner_trace;
  if (r.cfg.dual_bound_B) m["dual_bound_B"] = *r.cfg.dual_bound_B;
  if (with_time) m["timestamp"] = iso_now();
  return m;
}

json kkt_json(const KktReport& rep) {
  json j;
  j["feas_gap"] = rep.feas_gap;
  j["stat_resid"] = rep.stat_resid;
  j["cs_resid"] = rep.cs_resid;
  j["dual"] = rep.dual;
  if (rep.dual_upper) j["dual_upper"] = *rep.dual_upper;
  return j;
}

json trace_json(const std::vector<TraceRecord>& trace, bool with_time) {
  json arr = json::array();
  for (const auto& t : trace) {
    json row;
    row["k"] = t.k;
    row["eta_k"] = t.eta_k;
    row["psi"] = t.psi;
    row["g"] = t.g;
    row["inner_iters"] = t.inner_iters;
    row["dual_est"] = t.dual_est;
    row["stat_resid"] = t.stat_resid;
    row["cs_resid"] = t.cs_resid;
    if (with_time) row["elapsed_s"] = t.elapsed_s;
    row["zeta"] = t.zeta;
    row["bound_denominator"] = t.bound_denominator;
    if (t.dual_upper) row["dual_upper_bound"] = *t.dual_upper;
    if (!t.inner_psi.empty()) row["inner_psi"] = t.inner_psi;
    arr.push_back(std::move(row));
  }
  return arr;
}

json result_json(const ResolvedSolve& r, const LcppResult& res, bool with_time) {
  json out;
  out["iterations"] = res.iterations;
  out["k_hat"] = res.k_hat;
  out["psi_last"] = res.trace.empty() ? 0.0 : res.trace.back().psi;
  out["g_last"] = res.trace.empty() ? 0.0 : res.trace.back().g;
  std::size_t nnz = 0;
  for (double v : res.x_last) nnz += v != 0.0;
  out["nnz_last"] = nnz;
  out["kkt_last"] = kkt_json(res.kkt_last);
  out["kkt_hat"] = kkt_json(res.kkt_hat);
  if (r.cfg.dual_bound_B) {
    int exceeded = 0;
    for (const auto& t : res.trace) exceeded += t.dual_est > *r.cfg.dual_bound_B;
    out["dual_bound_B_exceeded"] = exceeded;
  }
  out["trace"] = trace_json(res.trace, with_time);
  return out;
}

int cmd_solve(const SolveFlags& f) {
  ResolvedSolve r;
  resolve(f, r);
  json report;
  report["schema"] = 1;
  report["manifest"] = manifest_json(f, r, true);

  json runs = json::array();
  json mean;
  LcppResult primary;
  double mean_stat = 0.0, mean_cs = 0.0, mean_feas = 0.0;
  for (int rep = 0; rep < std::max(1, f.repeats); ++rep) {
    LcppConfig cfg = r.cfg;
    cfg.seed = f.seed + static_cast<std::uint64_t>(rep);
    const auto res = run(cfg, r.obj, r.pen);
    mean_stat += res.kkt_last.stat_resid;
    mean_cs += res.kkt_last.cs_resid;
    mean_feas += res.kkt_last.feas_gap;
    if (rep == 0) {
      primary = res;
    } else {
      json rj;
      rj["seed"] = cfg.seed;
      rj["kkt_last"] = kkt_json(res.kkt_last);
      runs.push_back(std::move(rj));
    }
  }
  const int R = std::max(1, f.repeats);
  mean["stat_resid"] = mean_stat / R;
  mean["cs_resid"] = mean_cs / R;
  mean["feas_gap"] = mean_feas / R;

  report["result"] = result_json(r, primary, true);
  if (f.repeats > 1) {
    report["extra_runs"] = std::move(runs);
    report["kkt_mean_over_repeats"] = std::move(mean);
  }

  if (!f.trace_path.empty()) save_trace_csv(f.trace_path, primary.trace);
  if (!f.solution_path.empty())
    save_solution(f.solution_path, primary.x_last, primary.kkt_last.dual);
  if (!f.report_path.empty()) {
    std::ofstream out(f.report_path);
    if (!out) throw io_error("cannot write " + f.report_path);
    out << report.dump(2) << '\n';
  }

  std::size_t nnz = 0;
  for (double v : primary.x_last) nnz += v != 0.0;
  std::cout << "solve: K=" << primary.iterations << "  psi=" << report["result"]["psi_last"]
            << "  g=" << report["result"]["g_last"] << "  nnz=" << nnz
            << "  stat_resid=" << primary.kkt_last.stat_resid << '\n';
  return 0;
}

ProjectionProblem read_projection_input(const std::string& path) {
  ProjectionProblem p;
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw io_error("malformed projection input: " + std::string(e.what()));
    }
    p.v = j.at("v").get<std::vector<double>>();
    p.u = j.at("u").get<std::vector<double>>();
    p.tau = j.at("tau").get<double>();
    return p;
  }
  // text format: line 1 = v, line 2 = u, line 3 = tau
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  const auto read_row = [&](std::vector<double>& row, std::size_t line_no) {
    if (!std::getline(in, line)) throw parse_error(path, line_no, "missing row");
    std::istringstream ls(line);
    double v;
    while (ls >> v) row.push_back(v);
  };
  read_row(p.v, 1);
  read_row(p.u, 2);
  std::vector<double> taus;
  read_row(taus, 3);
  if (taus.size() != 1) throw parse_error(path, 3, "expected a single tau value");
  p.tau = taus[0];
  return p;
}

int cmd_project(const std::string& input, const std::string& out_path) {
  const auto p = read_projection_input(input);
  const auto r = project(p);

  // optimality certificate residuals
  double opt_resid = 0.0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    double ri;
    if (r.x[i] != 0.0) {
      const double sgn = r.x[i] > 0.0 ? 1.0 : -1.0;
      ri = std::abs(r.x[i] - p.v[i] + r.y * (p.u[i] + sgn));
    } else {
      const double lo = (p.u[i] - 1.0) * r.y, hi = (p.u[i] + 1.0) * r.y;
      ri = std::max({lo - p.v[i], p.v[i] - hi, 0.0});
    }
    opt_resid = std::max(opt_resid, ri);
  }
  const double cval = constraint_value(r.x, p.u);
  const double cs = std::abs(r.y * (cval - p.tau));

  json j;
  j["schema"] = 1;
  j["manifest"] = {{"tool", kVersion},
                   {"subcommand", "project"},
                   {"input", {{"path", input}, {"hash", fnv1a_file(input)}}},
                   {"timestamp", iso_now()}};
  j["y"] = r.y;
  j["active"] = r.active;
  j["constraint_value"] = cval;
  j["tau"] = p.tau;
  j["max_stationarity_residual"] = opt_resid;
  j["complementary_slackness"] = cs;
  j["x"] = r.x;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw io_error("cannot write " + out_path);
    out << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_kkt(const SolveFlags& f, const std::string& solution_path,
            const std::string& out_path) {
  const auto data = load_data(f.data, f.format, f.dim);
  const Objective obj =
      f.loss == "logistic" ? make_logistic(data) : make_squared(data);
  const auto pen = build_penalty(f.pen);
  const double eta = parse_eta(f.eta, data.features);
  const auto sol = load_solution(solution_path);
  if (sol.x.size() != data.features)
    throw config_error("solution dimension does not match the dataset");
  const auto rep = kkt_report(obj, pen, sol.x, sol.dual, eta);
  json j;
  j["schema"] = 1;
  j["manifest"] = {{"tool", kVersion},
                   {"subcommand", "kkt"},
                   {"data", {{"path", f.data}, {"hash", fnv1a_file(f.data)}}},
                   {"solution", {{"path", solution_path}, {"hash", fnv1a_file(solution_path)}}},
                   {"loss", f.loss},
                   {"timestamp", iso_now()}};
  j["eta"] = eta;
  j["penalty"] = penalty_json(f.pen, pen);
  j["g"] = g_value(pen, sol.x);
  j["psi"] = value(obj, sol.x);
  j["kkt"] = kkt_json(rep);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw io_error("cannot write " + out_path);
    out << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_generate(const SyntheticSpec& spec, const std::string& out,
                 const std::string& xtrue_out) {
  const auto gen = generate(spec);
  save_libsvm(gen.data, out);
  if (!xtrue_out.empty()) save_solution(xtrue_out, gen.x_true);
  std::cout << "generate: wrote " << gen.data.rows << " x " << gen.data.features
            << " dataset to " << out << '\n';
  return 0;
}

int cmd_bench(SolveFlags f, const std::string& sweep, const std::string& prefix,
              int jobs) {
  const auto eq = sweep.find('=');
  if (eq == std::string::npos)
    throw config_error("--sweep expects name=v1,v2,... (supported: eta, gamma)");
  const std::string name = sweep.substr(0, eq);
  if (name != "eta" && name != "gamma")
    throw config_error("--sweep supports eta or gamma");
  std::vector<std::string> values;
  {
    std::istringstream ls(sweep.substr(eq + 1));
    std::string tok;
    while (std::getline(ls, tok, ',')) values.push_back(tok);
  }
  if (values.empty()) throw config_error("--sweep has no values");

  struct Row {
    std::string value;
    double psi = 0.0, seconds = 0.0;
    std::size_t nnz = 0;
    std::string trace;
  };
  std::vector<Row> rows(values.size());

  const auto run_one = [&](std::size_t i) {
    SolveFlags fi = f;
    if (name == "eta") {
      fi.eta = values[i];
    } else {
      fi.gamma = std::strtod(values[i].c_str(), nullptr);
    }
    ResolvedSolve r;
    resolve(fi, r);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run(r.cfg, r.obj, r.pen);
    rows[i].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows[i].value = values[i];
    rows[i].psi = res.trace.empty() ? 0.0 : res.trace.back().psi;
    for (double v : res.x_last) rows[i].nnz += v != 0.0;
    rows[i].trace = prefix + "_" + name + "_" + values[i] + ".csv";
    save_trace_csv(rows[i].trace, res.trace);
  };

  jobs = std::max(1, jobs);
  for (std::size_t base = 0; base < values.size(); base += jobs) {
    std::vector<std::thread> pool;
    for (std::size_t i = base; i < std::min(values.size(), base + jobs); ++i)
      pool.emplace_back(run_one, i);
    for (auto& t : pool) t.join();
  }

  std::cout << name << ",psi,nnz,seconds,trace\n";
  for (const auto& r : rows)
    std::cout << r.value << ',' << r.psi << ',' << r.nnz << ',' << r.seconds << ','
              << r.trace << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - level-constrained proximal point solver for sparsity-"
               "constrained learning"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read flags from an INI/TOML config file");

  SolveFlags sf;
  auto* solve_cmd = app.add_subcommand("solve", "run the outer solver on a dataset");
  add_solve_flags(solve_cmd, sf);

  std::string proj_in, proj_out;
  auto* project_cmd =
      app.add_subcommand("project", "solve one tilted-l1 projection instance");
  project_cmd->add_option("--input", proj_in, "json {v,u,tau} or 3-line text file")
      ->required();
  project_cmd->add_option("--out", proj_out, "write the result as json");

  SolveFlags kf;
  std::string kkt_solution, kkt_out;
  auto* kkt_cmd = app.add_subcommand("kkt", "evaluate KKT residuals of a saved solution");
  kkt_cmd->add_option("--data", kf.data, "dataset path")->required();
  kkt_cmd->add_option("--format", kf.format, "data format: auto|libsvm|csv")
      ->default_val("auto");
  kkt_cmd->add_option("--dim", kf.dim, "feature dimension override");
  kkt_cmd->add_option("--loss", kf.loss, "loss: logistic|squared")->default_val("logistic");
  add_penalty_flags(kkt_cmd, kf.pen);
  kkt_cmd->add_option("--eta", kf.eta, "constraint level (supports the 'd' suffix)")
      ->required();
  kkt_cmd->add_option("--solution", kkt_solution, "solution json")->required();
  kkt_cmd->add_option("--out", kkt_out, "write the report as json");

  SyntheticSpec gspec;
  std::string gen_out, gen_xtrue, gen_design = "gaussian", gen_task = "classification";
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic dataset");
  gen_cmd->add_option("--n", gspec.n, "sample count")->default_val(1000);
  gen_cmd->add_option("--d", gspec.d, "feature count")->default_val(500);
  gen_cmd->add_option("--k-true", gspec.k_true, "true support size")->default_val(20);
  gen_cmd->add_option("--noise", gspec.noise_sigma, "noise level")->default_val(0.0);
  gen_cmd->add_option("--design", gen_design, "gaussian|ar")->default_val("gaussian");
  gen_cmd->add_option("--rho", gspec.ar_rho, "AR correlation")->default_val(0.5);
  gen_cmd->add_option("--task", gen_task, "classification|regression")
      ->default_val("classification");
  gen_cmd->add_option("--seed", gspec.seed, "generator seed")->default_val(0);
  gen_cmd->add_option("--out", gen_out, "output libsvm path")->required();
  gen_cmd->add_option("--x-true", gen_xtrue, "write the planted solution as json");

  SolveFlags bf;
  std::string sweep, bench_prefix = "bench";
  int jobs = 1;
  auto* bench_cmd =
      app.add_subcommand("bench", "sweep one parameter, one trace file per setting");
  add_solve_flags(bench_cmd, bf);
  bench_cmd->get_option("--eta")->required(false);
  bench_cmd->add_option("--sweep", sweep, "name=v1,v2,... (eta or gamma)")->required();
  bench_cmd->add_option("--prefix", bench_prefix, "trace file prefix")->default_val("bench");
  bench_cmd->add_option("--jobs", jobs, "parallel sweep points")->default_val(1);

  try {
    app.parse(argc, argv);
    if (solve_cmd->parsed()) return cmd_solve(sf);
    if (project_cmd->parsed()) return cmd_project(proj_in, proj_out);
    if (kkt_cmd->parsed()) return cmd_kkt(kf, kkt_solution, kkt_out);
    if (gen_cmd->parsed()) {
      gspec.design = gen_design == "ar" ? DesignKind::CorrelatedAR : DesignKind::GaussianIID;
      gspec.classification = gen_task != "regression";
      if (bf.eta.empty()) bf.eta = "1";
      return cmd_generate(gspec, gen_out, gen_xtrue);
    }
    if (bench_cmd->parsed()) {
      if (bf.eta.empty()) bf.eta = "1";
      return cmd_bench(bf, sweep, bench_prefix, jobs);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
