#include "supersle/sim.hpp"

#include "supersle/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace supersle {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // One scrambling round over the pair so neighbouring (seed, stream)
  // values start in unrelated states.
  SplitMix64 s(seed ^ (0xD1B54A32D192ED03ull * (stream + 1)));
  return s.next();
}

}  // namespace

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream)
    : rng_(mix_seed(seed, stream)) {}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = rng_.uniform01();
  double u2 = rng_.uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

// ---------------------------------------------------------------------------

void validate_config(const SimConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (cfg.paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (cfg.kappa < 0) throw std::invalid_argument("kappa must be >= 0");
  if (cfg.grid.empty()) throw std::invalid_argument("grid must be nonempty");
  for (const auto& z : cfg.grid)
    if (!(z.imag() >= cfg.min_imag))
      throw std::invalid_argument(
          "grid points must sit above the imaginary-part floor");
  if (cfg.output_times < 2)
    throw std::invalid_argument("output_times must be >= 2");
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string complex_label(const std::complex<double>& z) {
  std::ostringstream os;
  os << std::setprecision(6) << z.real() << (z.imag() < 0 ? "-" : "+")
     << std::abs(z.imag()) << "i";
  return os.str();
}

/// Streaming accumulator for one (time, observable) cell.
struct Accum {
  double sum = 0.0, sumsq = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    double m = mean();
    double var = (sumsq - static_cast<double>(n) * m * m) /
                 static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
};

/// Walk one driving path, invoking visit(sample_slot, grid_index, g, f,
/// swallowed) at each sampled time.
template <typename Visit>
void run_path(const SimConfig& cfg, std::uint64_t path_index,
              const std::vector<long>& sample_steps, const Visit& visit) {
  GaussianStream gauss(cfg.seed, path_index);
  const double dt = cfg.t_max / static_cast<double>(cfg.steps);
  const double sqdt = std::sqrt(dt);
  const double sqrt_kappa = std::sqrt(to_double(cfg.kappa));
  const std::size_t m = cfg.grid.size();

  std::vector<std::complex<double>> g(cfg.grid.begin(), cfg.grid.end());
  std::vector<char> swallowed(m, 0);
  double B = 0.0;

  std::size_t slot = 0;
  auto emit = [&](long step) {
    while (slot < sample_steps.size() && sample_steps[slot] == step) {
      for (std::size_t i = 0; i < m; ++i)
        visit(slot, i, g[i], g[i] - sqrt_kappa * B, swallowed[i]);
      ++slot;
    }
  };

  emit(0);
  for (long step = 1; step <= cfg.steps; ++step) {
    for (std::size_t i = 0; i < m; ++i) {
      if (swallowed[i]) continue;
      std::complex<double> denom = g[i] - sqrt_kappa * B;
      if (std::abs(denom) < cfg.swallow_threshold) {
        swallowed[i] = 1;
        continue;
      }
      g[i] += dt * 2.0 / denom;
    }
    B += sqdt * gauss.next();
    emit(step);
  }
}

std::vector<long> sample_schedule(const SimConfig& cfg) {
  std::vector<long> steps;
  for (int j = 0; j < cfg.output_times; ++j) {
    long s = static_cast<long>(std::llround(
        static_cast<double>(cfg.steps) * j / (cfg.output_times - 1)));
    if (steps.empty() || s != steps.back()) steps.push_back(s);
  }
  return steps;
}

}  // namespace

PathTrace simulate_one_path(const SimConfig& cfg, std::uint64_t path_index) {
  validate_config(cfg);
  const double dt = cfg.t_max / static_cast<double>(cfg.steps);
  const double sqrt_kappa = std::sqrt(to_double(cfg.kappa));
  PathTrace tr;
  const std::size_t m = cfg.grid.size();
  tr.g.assign(m, {});
  tr.f.assign(m, {});
  tr.swallowed.assign(m, {});

  // Record every step: the schedule is 0..steps.
  std::vector<long> all(cfg.steps + 1);
  for (long s = 0; s <= cfg.steps; ++s) all[s] = s;

  GaussianStream gauss(cfg.seed, path_index);  // replay B alongside
  double B = 0.0;
  std::vector<double> Bs(cfg.steps + 1, 0.0);
  for (long s = 1; s <= cfg.steps; ++s) {
    B += std::sqrt(dt) * gauss.next();
    Bs[s] = B;
  }
  (void)sqrt_kappa;

  run_path(cfg, path_index, all,
           [&](std::size_t slot, std::size_t i, std::complex<double> g,
               std::complex<double> f, char sw) {
             if (i == 0 && tr.t.size() <= slot) {
               tr.t.push_back(dt * static_cast<double>(slot));
               tr.B.push_back(Bs[slot]);
             }
             tr.g[i].push_back(g);
             tr.f[i].push_back(f);
             tr.swallowed[i].push_back(sw);
           });
  return tr;
}

SimTable simulate_sle(const SimConfig& cfg) {
  validate_config(cfg);
  const std::vector<long> schedule = sample_schedule(cfg);
  const double dt = cfg.t_max / static_cast<double>(cfg.steps);
  const std::size_t m = cfg.grid.size();
  // observable order per grid point: re_g, im_g, re_f, im_f
  std::vector<std::vector<Accum>> acc(schedule.size(),
                                      std::vector<Accum>(4 * m));

  for (long p = 0; p < cfg.paths; ++p) {
    run_path(cfg, static_cast<std::uint64_t>(p), schedule,
             [&](std::size_t slot, std::size_t i, std::complex<double> g,
                 std::complex<double> f, char sw) {
               if (sw) return;
               acc[slot][4 * i + 0].add(g.real());
               acc[slot][4 * i + 1].add(g.imag());
               acc[slot][4 * i + 2].add(f.real());
               acc[slot][4 * i + 3].add(f.imag());
             });
  }

  static const char* kParts[4] = {"re_g", "im_g", "re_f", "im_f"};
  SimTable table;
  for (std::size_t slot = 0; slot < schedule.size(); ++slot) {
    for (std::size_t i = 0; i < m; ++i) {
      for (int part = 0; part < 4; ++part) {
        const Accum& a = acc[slot][4 * i + part];
        SimTable::Row row;
        row.t = dt * static_cast<double>(schedule[slot]);
        row.observable =
            std::string(kParts[part]) + "@" + complex_label(cfg.grid[i]);
        row.mean = a.mean();
        row.stderr_ = a.se();
        row.n_paths = a.n;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::string SimTable::to_csv() const {
  std::ostringstream os;
  os << "t,observable,mean,stderr,n_paths\n";
  for (const Row& r : rows)
    os << fmt_double(r.t) << ',' << r.observable << ',' << fmt_double(r.mean)
       << ',' << fmt_double(r.stderr_) << ',' << r.n_paths << '\n';
  return os.str();
}

std::string SimTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Row& r : rows) {
    nlohmann::json row;
    row["t"] = r.t;
    row["observable"] = r.observable;
    row["mean"] = r.mean;
    row["stderr"] = r.stderr_;
    row["n_paths"] = r.n_paths;
    arr.push_back(row);
  }
  return arr.dump(2);
}

std::complex<double> kappa0_closed_form(std::complex<double> z, double t) {
  return std::sqrt(z * z + 4.0 * t);
}

double kappa0_max_error(const SimConfig& cfg) {
  SimConfig c = cfg;
  c.kappa = Rational(0);
  c.paths = 1;
  validate_config(c);
  const double dt = c.t_max / static_cast<double>(c.steps);
  std::vector<long> all(c.steps + 1);
  for (long s = 0; s <= c.steps; ++s) all[s] = s;
  double err = 0.0;
  run_path(c, 0, all,
           [&](std::size_t slot, std::size_t i, std::complex<double> g,
               std::complex<double>, char sw) {
             if (sw) return;
             double t = dt * static_cast<double>(slot);
             err = std::max(err, std::abs(g - kappa0_closed_form(c.grid[i], t)));
           });
  return err;
}

// ---------------------------------------------------------------------------
// Numeric martingale estimate.

namespace {

struct SparseMat {
  std::size_t dim = 0;
  // (row, col, value) triplets.
  std::vector<std::tuple<std::size_t, std::size_t, double>> nz;

  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [r, c, x] : nz) out[r] += x * v[c];
  }
};

/// Exact coordinates of a rational-coefficient state in the full basis.
Vec state_coords(const VermaState& s, const std::map<StateKey, std::size_t>& index,
                 std::size_t dim) {
  Vec out(dim, Rational(0));
  s.for_each([&](const StateKey& key, const Grassmann& g) {
    auto it = index.find(key);
    if (it == index.end()) throw std::logic_error("state outside truncated basis");
    Poly p = g.coeff(0);
    if (!p.is_constant()) throw std::logic_error("state coefficient not rational");
    out[it->second] = p.constant_value();
  });
  return out;
}

SparseMat to_sparse(const Matrix& cols_by_column, std::size_t dim) {
  SparseMat m;
  m.dim = dim;
  for (std::size_t c = 0; c < cols_by_column.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (cols_by_column[c][r] != 0)
        m.nz.emplace_back(r, c, to_double(cols_by_column[c][r]));
  return m;
}

}  // namespace

MartingaleEstimate estimate_martingale(const SimConfig& cfg, int two_level_max,
                                       const Rational& c, const Rational& delta) {
  validate_config(cfg);
  if (two_level_max > 8)
    throw std::invalid_argument("numeric martingale estimate supports levels <= 4");
  GenCtx gens = default_ctx();
  WalkSpec w = walk_classical(gens, c, delta, cfg.kappa);
  ModCtx mctx = w.mod();

  // Full truncated basis and index.
  std::vector<StateKey> basis;
  for (int l = 0; l <= two_level_max; ++l)
    for (const StateKey& k : level_basis(Sector::Virasoro, l)) basis.push_back(k);
  const std::size_t dim = basis.size();
  std::map<StateKey, std::size_t> index;
  for (std::size_t i = 0; i < dim; ++i) index[basis[i]] = i;

  // Right-multiplication matrices (columns = images of basis states):
  // T_alpha for the full drift generator, T_lower for L_{-1}.
  AlgebraElement alpha = full_drift_generator(w).reduce_k(cfg.kappa);
  AlgebraElement lower = AlgebraElement::L(w.alg, -1);
  Matrix alpha_cols(dim), lower_cols(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    Grassmann one = Grassmann::one(gens);
    AlgebraElement word = AlgebraElement::word(w.alg, basis[j].first, one);
    VermaState vj = apply(word, VermaState::vacuum(mctx));
    alpha_cols[j] =
        state_coords(apply(lift(vj) * alpha, VermaState::vacuum(mctx))
                         .truncate(two_level_max),
                     index, dim);
    lower_cols[j] =
        state_coords(apply(lift(vj) * lower, VermaState::vacuum(mctx))
                         .truncate(two_level_max),
                     index, dim);
  }
  SparseMat T_alpha = to_sparse(alpha_cols, dim);
  SparseMat T_lower = to_sparse(lower_cols, dim);

  // Exact quotient projector against the singular-descendant span, embedded
  // into the full basis.
  std::vector<Vec> span_full;
  for (int l = 1; l <= two_level_max; ++l) {
    SubmoduleLevel sub = singular_descendants(mctx, l);
    std::vector<std::size_t> emb(sub.basis.size());
    for (std::size_t i = 0; i < sub.basis.size(); ++i) emb[i] = index.at(sub.basis[i]);
    for (const Vec& v : sub.span) {
      Vec full(dim, Rational(0));
      for (std::size_t i = 0; i < v.size(); ++i) full[emb[i]] = v[i];
      span_full.push_back(std::move(full));
    }
  }
  Matrix P = quotient_projector(span_full, dim);
  std::vector<std::vector<double>> Pd(dim, std::vector<double>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t cidx = 0; cidx < dim; ++cidx)
      Pd[r][cidx] = to_double(P[r][cidx]);

  // Exact oracle: projected expected_state at t = t_max, computed with the
  // same projector so quotient representatives agree.  t_max converts to an
  // exact rational (doubles are dyadic).
  Rational t_rat = exact_from_double(cfg.t_max);
  VermaState expect = expected_state(w, two_level_max);
  Vec expect_coords(dim, Rational(0));
  expect.for_each([&](const StateKey& key, const Grassmann& g) {
    Poly p = g.coeff(0).eval_symbol(SYM_T, t_rat);
    if (!p.is_constant())
      throw std::logic_error("expectation coefficient not a polynomial in t");
    expect_coords[index.at(key)] = p.constant_value();
  });
  std::vector<double> exact_proj(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    Rational acc(0);
    for (std::size_t cidx = 0; cidx < dim; ++cidx)
      acc += P[r][cidx] * expect_coords[cidx];
    exact_proj[r] = to_double(acc);
  }

  // Monte Carlo over paths.
  const double dt = cfg.t_max / static_cast<double>(cfg.steps);
  const double sqdt = std::sqrt(dt);
  const double sqrt_kappa = std::sqrt(to_double(cfg.kappa));
  std::vector<double> sum(dim, 0.0), sumsq(dim, 0.0);
  std::vector<double> v(dim), av(dim), lv(dim), proj(dim);
  for (long p = 0; p < cfg.paths; ++p) {
    GaussianStream gauss(cfg.seed, static_cast<std::uint64_t>(p));
    std::fill(v.begin(), v.end(), 0.0);
    v[index.at(StateKey{Monomial{}, 0})] = 1.0;
    for (long s = 0; s < cfg.steps; ++s) {
      T_alpha.apply(v, av);
      T_lower.apply(v, lv);
      const double dB = sqdt * gauss.next();
      for (std::size_t i = 0; i < dim; ++i)
        v[i] += av[i] * dt + sqrt_kappa * lv[i] * dB;
    }
    for (std::size_t r = 0; r < dim; ++r) {
      double acc = 0.0;
      for (std::size_t cidx = 0; cidx < dim; ++cidx) acc += Pd[r][cidx] * v[cidx];
      proj[r] = acc;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      sum[i] += proj[i];
      sumsq[i] += proj[i] * proj[i];
    }
  }

  MartingaleEstimate est;
  const double n = static_cast<double>(cfg.paths);
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < dim; ++i) {
    std::string label = monomial_str(basis[i].first);
    if (label.empty()) label = "|D>";
    est.component.push_back(label);
    double mean = sum[i] / n;
    double var = cfg.paths > 1
                     ? std::max(0.0, (sumsq[i] - n * mean * mean) / (n - 1.0))
                     : 0.0;
    double se = std::sqrt(var / n);
    est.mean.push_back(mean);
    est.se.push_back(se);
    est.exact.push_back(exact_proj[i]);
    double z = 0.0;
    if (se > 0.0) {
      z = (mean - exact_proj[i]) / se;
      if (std::abs(z) > 3.0) {
        pass = false;
        detail << label << ": |z| = " << std::abs(z) << " > 3; ";
      }
    } else if (std::abs(mean - exact_proj[i]) > 1e-12) {
      pass = false;
      detail << label << ": frozen component deviates by "
             << std::abs(mean - exact_proj[i]) << "; ";
    }
    est.zscore.push_back(z);
    est.max_abs_z = std::max(est.max_abs_z, std::abs(z));
  }
  est.pass = pass;
  if (pass)
    detail << "all quotient components within 3 standard errors (max |z| = "
           << est.max_abs_z << ")";
  est.detail = detail.str();
  return est;
}

}  // namespace supersle
