#include "lcpp/data_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace lcpp {

namespace {

bool parse_double(const std::string& tok, double& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && !tok.empty() && errno != ERANGE;
}

bool parse_index(const std::string& tok, long& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtol(tok.c_str(), &end, 10);
  return end == tok.c_str() + tok.size() && !tok.empty() && errno != ERANGE;
}

void infer_classification(Dataset& data) {
  data.classification =
      !data.labels.empty() &&
      std::all_of(data.labels.begin(), data.labels.end(),
                  [](double b) { return b == 1.0 || b == -1.0; });
}

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset load_libsvm(const std::string& path, std::size_t dim_override) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);

  Dataset data;
  data.indptr.push_back(0);
  std::size_t max_index = 0;  // 1-based
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<long, double>> row;

  while (std::getline(in, line)) {
    ++line_no;
    // strip comments and trailing whitespace
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    double label;
    if (!parse_double(tok, label))
      throw parse_error(path, line_no, "bad label '" + tok + "'");

    row.clear();
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw parse_error(path, line_no, "expected idx:val, got '" + tok + "'");
      long idx;
      double val;
      if (!parse_index(tok.substr(0, colon), idx))
        throw parse_error(path, line_no, "bad feature index in '" + tok + "'");
      if (idx <= 0)
        throw parse_error(path, line_no, "feature indices are 1-based and positive");
      if (!parse_double(tok.substr(colon + 1), val))
        throw parse_error(path, line_no, "bad feature value in '" + tok + "'");
      row.emplace_back(idx, val);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i].first == row[i - 1].first)
        throw parse_error(path, line_no,
                          "duplicate feature index " + std::to_string(row[i].first));

    for (const auto& [idx, val] : row) {
      data.indices.push_back(static_cast<std::uint32_t>(idx - 1));
      data.values.push_back(val);
      max_index = std::max(max_index, static_cast<std::size_t>(idx));
    }
    data.labels.push_back(label);
    data.indptr.push_back(data.values.size());
    ++data.rows;
  }

  if (dim_override > 0 && dim_override < max_index)
    throw config_error("dim override " + std::to_string(dim_override) +
                       " below the largest feature index " + std::to_string(max_index));
  data.features = std::max(dim_override, max_index);
  infer_classification(data);
  data.validate();
  return data;
}

void save_libsvm(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  for (std::size_t i = 0; i < data.rows; ++i) {
    out << format_g(data.labels[i]);
    for (std::size_t k = data.indptr[i]; k < data.indptr[i + 1]; ++k)
      out << ' ' << (data.indices[k] + 1) << ':' << format_g(data.values[k]);
    out << '\n';
  }
  if (!out) throw io_error("write failed for " + path);
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);

  Dataset data;
  data.indptr.push_back(0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ls, field, ',')) {
      double v;
      if (!parse_double(field, v))
        throw parse_error(path, line_no, "bad number '" + field + "'");
      vals.push_back(v);
    }
    if (vals.size() < 2) throw parse_error(path, line_no, "need a label and features");
    if (data.rows == 0) {
      data.features = vals.size() - 1;
    } else if (vals.size() - 1 != data.features) {
      throw parse_error(path, line_no, "inconsistent column count");
    }
    data.labels.push_back(vals[0]);
    for (std::size_t j = 1; j < vals.size(); ++j) {
      data.indices.push_back(static_cast<std::uint32_t>(j - 1));
      data.values.push_back(vals[j]);
    }
    data.indptr.push_back(data.values.size());
    ++data.rows;
  }
  infer_classification(data);
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  std::vector<double> row(data.features);
  for (std::size_t i = 0; i < data.rows; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t k = data.indptr[i]; k < data.indptr[i + 1]; ++k)
      row[data.indices[k]] = data.values[k];
    out << format_g(data.labels[i]);
    for (double v : row) out << ',' << format_g(v);
    out << '\n';
  }
  if (!out) throw io_error("write failed for " + path);
}

SyntheticData generate(const SyntheticSpec& spec) {
  if (spec.k_true > spec.d)
    throw config_error("generate: k_true cannot exceed the dimension");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticData out;
  out.x_true.assign(spec.d, 0.0);

  // support: partial Fisher-Yates; magnitudes bounded away from zero
  std::vector<std::size_t> perm(spec.d);
  for (std::size_t i = 0; i < spec.d; ++i) perm[i] = i;
  for (std::size_t i = 0; i < spec.k_true; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, spec.d - 1);
    std::swap(perm[i], perm[pick(rng)]);
    const double sign = (rng() & 1) ? 1.0 : -1.0;
    out.x_true[perm[i]] = sign * (1.0 + std::abs(gauss(rng)));
  }

  Dataset& data = out.data;
  data.rows = spec.n;
  data.features = spec.d;
  data.indptr.reserve(spec.n + 1);
  data.indptr.push_back(0);
  data.indices.reserve(spec.n * spec.d);
  data.values.reserve(spec.n * spec.d);
  data.classification = spec.classification;

  std::vector<double> row(spec.d);
  const double ar_mix = std::sqrt(1.0 - spec.ar_rho * spec.ar_rho);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.d; ++j) {
      const double z = gauss(rng);
      row[j] = (spec.design == DesignKind::CorrelatedAR && j > 0)
                   ? spec.ar_rho * row[j - 1] + ar_mix * z
                   : z;
    }
    double margin = 0.0;
    for (std::size_t j = 0; j < spec.d; ++j) margin += row[j] * out.x_true[j];

    double label;
    if (spec.classification) {
      double m = margin + (spec.noise_sigma > 0.0 ? spec.noise_sigma * gauss(rng) : 0.0);
      for (int tries = 0; m == 0.0 && spec.noise_sigma > 0.0 && tries < 100; ++tries)
        m = margin + spec.noise_sigma * gauss(rng);
      if (m == 0.0) m = (rng() & 1) ? 1.0 : -1.0;
      label = m > 0.0 ? 1.0 : -1.0;
    } else {
      label = margin + (spec.noise_sigma > 0.0 ? spec.noise_sigma * gauss(rng) : 0.0);
    }
    data.labels.push_back(label);
    for (std::size_t j = 0; j < spec.d; ++j) {
      data.indices.push_back(static_cast<std::uint32_t>(j));
      data.values.push_back(row[j]);
    }
    data.indptr.push_back(data.values.size());
  }
  data.validate();
  return out;
}

void save_solution(const std::string& path, std::span<const double> x, double dual) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["dual"] = dual;
  j["x"] = std::vector<double>(x.begin(), x.end());
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw io_error("write failed for " + path);
}

Solution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed solution file " + path + ": " + e.what());
  }
  if (!j.contains("schema") || j["schema"] != 1)
    throw io_error("solution file " + path + ": unsupported schema");
  Solution sol;
  sol.x = j.at("x").get<std::vector<double>>();
  sol.dual = j.value("dual", 0.0);
  return sol;
}

void save_trace_csv(const std::string& path, std::span<const TraceRecord> trace) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << "k,eta_k,psi,g,inner_iters,dual_est,stat_resid,cs_resid,elapsed_s\n";
  for (const auto& r : trace) {
    out << r.k << ',' << format_g(r.eta_k) << ',' << format_g(r.psi) << ','
        << format_g(r.g) << ',' << r.inner_iters << ',' << format_g(r.dual_est)
        << ',' << format_g(r.stat_resid) << ',' << format_g(r.cs_resid) << ','
        << format_g(r.elapsed_s) << '\n';
  }
  if (!out) throw io_error("write failed for " + path);
}

std::vector<TraceRecord> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "k,eta_k,psi,g,inner_iters,dual_est,stat_resid,cs_resid,elapsed_s")
    throw io_error("trace file " + path + ": unexpected header");
  std::vector<TraceRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw parse_error(path, line_no, "expected 9 columns");
    TraceRecord r;
    double tmp;
    long k;
    if (!parse_index(fields[0], k)) throw parse_error(path, line_no, "bad k");
    r.k = static_cast<int>(k);
    const auto num = [&](int idx) {
      if (!parse_double(fields[static_cast<std::size_t>(idx)], tmp))
        throw parse_error(path, line_no, "bad number in column " + std::to_string(idx));
      return tmp;
    };
    r.eta_k = num(1);
    r.psi = num(2);
    r.g = num(3);
    long ii;
    if (!parse_index(fields[4], ii)) throw parse_error(path, line_no, "bad inner_iters");
    r.inner_iters = static_cast<std::size_t>(ii);
    r.dual_est = num(5);
    r.stat_resid = num(6);
    r.cs_resid = num(7);
    r.elapsed_s = num(8);
    out.push_back(r);
  }
  return out;
}

}  // namespace lcpp
