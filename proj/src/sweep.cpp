#include "displab/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "displab/parallel.hpp"
#include "displab/rng.hpp"

namespace displab {

namespace {

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * uniform01(g));
}

std::size_t uniform_index(std::mt19937_64& g, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(g) * static_cast<double>(n)));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
  return s;
}

const char* kind_name(DampedWeight::Kind k) {
  switch (k) {
    case DampedWeight::Kind::kato:
      return "kato";
    case DampedWeight::Kind::singular:
      return "singular";
    case DampedWeight::Kind::unit:
      return "unit";
  }
  return "?";
}

}  // namespace

OscSweepRow draw_osc_config(const SweepBlock& sw, const std::string& family, std::uint64_t seed, std::size_t i) {
  auto g = make_stream(seed, i);
  OscSweepRow row;
  row.index = i;
  row.family = family;
  if (family == "statphase") {
    static const double Ls[3] = {1.0, 4.0, 16.0};
    row.a = log_uniform(g, 0.1, 10.0);
    row.t = log_uniform(g, 1.0, 100.0);
    row.L = Ls[uniform_index(g, 3)];
    return row;
  }
  if (family != "lambda" && family != "u") throw std::invalid_argument("unknown sweep family " + family);
  // lambda: undamped kato, undamped unit, damped kato, damped singular; u: the damped two
  const std::size_t variant = family == "u" ? 2 + uniform_index(g, 2) : uniform_index(g, 4);
  PhaseLambda& p = row.phase;
  p.sign = uniform01(g) < 0.5 ? Sign::minus : Sign::plus;
  const std::size_t m = 1 + uniform_index(g, sw.m_max);
  for (std::size_t j = 0; j < m; ++j) {
    p.b.push_back(log_uniform(g, sw.b_min, sw.b_max));
    p.sigma.push_back(uniform01(g) < 0.25 ? 0.0 : log_uniform(g, 1e-2, sw.sigma_max));
  }
  std::sort(p.sigma.begin(), p.sigma.end(), std::greater<>());
  DampedWeight& w = row.weight;
  if (variant >= 2) {
    const std::size_t ell = 1 + uniform_index(g, 3);
    for (std::size_t i2 = 0; i2 < ell; ++i2) {
      w.rho.push_back(log_uniform(g, 1e-2, sw.sigma_max));
      w.c.push_back(log_uniform(g, sw.c_min, sw.c_max));
    }
    std::sort(w.rho.begin(), w.rho.end(), std::greater<>());
  }
  switch (variant) {
    case 0:
    case 2:
      w.kind = DampedWeight::Kind::kato;
      w.k = uniform_index(g, m);
      break;
    case 1:
      w.kind = DampedWeight::Kind::unit;
      break;
    default:
      w.kind = DampedWeight::Kind::singular;
      w.k = uniform_index(g, w.rho.size());
      break;
  }
  return row;
}

void evaluate_osc_row(OscSweepRow& row, const OscOptions& opt) {
  try {
    if (row.family == "statphase") {
      row.result = osc_integral_statphase(row.a, row.t, row.L, opt);
    } else {
      row.result = osc_integral_lambda(row.phase, row.weight, kInfinity, opt);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

std::vector<OscSweepRow> osc_sweep(const SweepBlock& sw, const std::string& family, std::uint64_t seed,
                                   std::size_t count, const OscOptions& opt) {
  std::vector<OscSweepRow> rows(count);
  parallel_for(count, [&](std::size_t i) {
    rows[i] = draw_osc_config(sw, family, seed, i);
    evaluate_osc_row(rows[i], opt);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<OscSweepRow>& rows, const std::string& config_hash) {
  out << "# config_hash=" << config_hash << "\n";
  out << "index,family,sign,m,weight,k,b,sigma,rho,c,a,t,L,value_re,value_im,quad_error,bound,ratio,status\n";
  for (const auto& r : rows) {
    const bool sp = r.family == "statphase";
    out << r.index << ',' << r.family << ',';
    if (sp) {
      out << ",,,,,,,," << num(r.a) << ',' << num(r.t) << ',' << num(r.L) << ',';
    } else {
      out << (r.phase.sign == Sign::plus ? "plus" : "minus") << ',' << r.phase.m() << ',' << kind_name(r.weight.kind)
          << ',' << r.weight.k << ',' << join(r.phase.b) << ',' << join(r.phase.sigma) << ',' << join(r.weight.rho)
          << ',' << join(r.weight.c) << ",,,,";
    }
    out << num(r.result.value.real()) << ',' << num(r.result.value.imag()) << ',' << num(r.result.quad_error) << ','
        << num(r.result.ref_bound) << ',' << num(r.result.ratio) << ',' << (r.ok ? "ok" : "error") << '\n';
  }
}

}  // namespace displab
