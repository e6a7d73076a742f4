#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "displab/norms.hpp"
#include "displab/potentials.hpp"

namespace displab {

// Periodic box [-L, L)^3 with n points per axis.
struct Grid3 {
  std::size_t n = 64;
  double L = 10.0;

  void validate() const;
  std::size_t size() const { return n * n * n; }
  double dx() const { return 2.0 * L / static_cast<double>(n); }
  double cell() const { return dx() * dx() * dx(); }
  double coord(std::size_t i) const { return -L + dx() * static_cast<double>(i); }
  // wavenumber of FFT index k: pi k / L with k wrapped to [-n/2, n/2)
  double freq(std::size_t k) const;
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
};

class WaveField {
 public:
  WaveField() = default;
  explicit WaveField(const Grid3& g);
  static WaveField from_function(const Grid3& g, const std::function<cplx(const Vec3&)>& f);

  const Grid3& grid() const { return grid_; }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  Vec3 point(std::size_t idx) const;

 private:
  Grid3 grid_;
  std::vector<cplx> values_;
};

struct FieldNorms {
  double l1 = 0, l2 = 0, l6 = 0, linf = 0;
};
FieldNorms field_norms(const WaveField& psi);
// ||a - b||_2 / ||b||_2
double relative_l2(const WaveField& a, const WaveField& b);

struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// e^{-i dt |xi|^2} on every Fourier mode.
WaveField free_evolve(const WaveField& psi, double dt);

// Reusable Strang stepper: V0 sampled once, free multiplier cached.
class SplitStepper {
 public:
  SplitStepper(const Grid3& g, const SeparablePotential& V, double dt);
  void step(WaveField& psi, double t) const;  // advances from t to t + dt
  void free_step(WaveField& psi) const;       // e^{-i dt H0}
  // psi <- psi * V(t, x) on the grid
  void multiply_potential(WaveField& psi, double t) const;
  double dt() const { return dt_; }

 private:
  Grid3 grid_;
  SeparablePotential V_;
  double dt_;
  std::vector<double> v0_;
  std::vector<cplx> free_mult_;
};

WaveField step_splitstep(const WaveField& psi, const SeparablePotential& V, double t, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldNorms> norms;
  std::vector<WaveField> fields;  // filled only when requested
  double l1_initial = 0.0;
  double s = 0.0;
};

struct EvolveOptions {
  std::size_t record_every = 1;  // steps between recorded samples
  bool keep_fields = false;
  std::function<void(std::size_t, double, const WaveField&)> on_record;
};

Trajectory evolve(const WaveField& psi_s, const SeparablePotential& V, double s, double t, double dt,
                  const EvolveOptions& opt = {});

struct DuhamelResult {
  std::vector<WaveField> terms;   // psi_j(t), j = 0..m_max
  std::vector<double> term_norms;
  std::vector<double> ratios;     // ||psi_j|| / ||psi_{j-1}||, j >= 1
  bool contraction_warning = false;
  WaveField partial_sum(std::size_t m) const;
};

// Time-ordered Duhamel terms by a trapezoid march:
//   psi_j(t_{n+1}) = U(dt)[psi_j(t_n) - i dt/2 V(t_n) psi_{j-1}(t_n)] - i dt/2 V(t_{n+1}) psi_{j-1}(t_{n+1})
// Requires the y-small flag unless require_small is false.
DuhamelResult duhamel_iterate(const WaveField& psi_s, const SeparablePotential& V, double s, double t, double dt,
                              std::size_t m_max, bool require_small = true, const NormThresholds& th = {});

struct DispersiveRecord {
  double t = 0;
  double scaled = 0;  // ||psi(t)||_inf |t-s|^{3/2} / ||psi_s||_1
  bool past_wrap = false;
};
std::vector<DispersiveRecord> measure_dispersive(const Trajectory& traj, double wrap = 0.0);
// L n / (2 pi Lambda_max), Lambda_max the largest |xi| carrying spectral
// amplitude above 1e-8 of the peak.
double wrap_horizon(const WaveField& psi0);

struct StrichartzNorms {
  double sup_l2 = 0;
  double l2_l6 = 0;  // (int ||psi(t)||_6^2 dt)^{1/2}, trapezoid in t
};
StrichartzNorms measure_strichartz(const Trajectory& traj);

void write_snapshot(const std::filesystem::path& file, const WaveField& psi);
WaveField read_snapshot(const std::filesystem::path& file);

}  // namespace displab
