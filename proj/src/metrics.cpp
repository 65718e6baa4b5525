#include "holo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holo {

namespace {

double sum_range(const double* first, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += first[i];
    return s;
  }
  const std::size_t half = n / 2;
  return sum_range(first, half) + sum_range(first + half, n - half);
}

ComplexVector lift(const ComplexMatrix& embedding, const ComplexVector& v) {
  return embedding.size() == 0 ? v : ComplexVector(embedding * v);
}

ComplexVector single_input(double t) {
  ComplexVector v(2);
  v << std::cos(t), std::sin(t);
  return v;
}

ComplexVector product_input(double t1, double t2) {
  ComplexVector v(4);
  const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
  v << c1 * c2, c1 * s2, s1 * c2, s1 * s2;
  return v;
}

void check_samples(int n) {
  if (n < 1) throw std::invalid_argument("fidelity grid needs at least one point");
}

void check_target(const ComplexMatrix& target, Eigen::Index d) {
  if (target.rows() != d || target.cols() != d) throw std::invalid_argument("target dimension");
}

FidelityReport finish(std::vector<double>& samples, FidelityKind kind) {
  FidelityReport r;
  r.value = std::clamp(pairwise_mean(samples), 0.0, 1.0);
  r.n_samples = static_cast<int>(samples.size());
  r.definition = kind;
  return r;
}

}  // namespace

std::string to_string(FidelityKind kind) {
  switch (kind) {
    case FidelityKind::single_qubit_avg: return "single_qubit_avg";
    case FidelityKind::two_qubit_avg: return "two_qubit_avg";
    case FidelityKind::state: return "state";
  }
  return "unknown";
}

nlohmann::json FidelityReport::to_json() const {
  return {{"value", value},
          {"n_samples", n_samples},
          {"definition", to_string(definition)},
          {"model_config_hash", model_config_hash}};
}

double pairwise_sum(const std::vector<double>& values) {
  return values.empty() ? 0.0 : sum_range(values.data(), values.size());
}

double pairwise_mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty set");
  return pairwise_sum(values) / static_cast<double>(values.size());
}

std::vector<double> input_angles(int n) {
  check_samples(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = 2.0 * kPi * k / n;
  return out;
}

FidelityReport single_qubit_gate_fidelity(const EvolveFn& evolve, const ComplexMatrix& target,
                                          int n, const ComplexMatrix& embedding) {
  check_target(target, 2);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (double t : input_angles(n)) {
    const ComplexVector in = single_input(t);
    const ComplexVector f = lift(embedding, target * in);
    const ComplexMatrix rho = evolve(in);
    samples.push_back(f.dot(rho * f).real());
  }
  return finish(samples, FidelityKind::single_qubit_avg);
}

FidelityReport two_qubit_gate_fidelity(const EvolveFn& evolve, const ComplexMatrix& target, int n,
                                       const ComplexMatrix& embedding) {
  check_target(target, 4);
  const auto angles = input_angles(n);
  std::vector<double> samples;
  samples.reserve(angles.size() * angles.size());
  for (double t1 : angles) {
    for (double t2 : angles) {
      const ComplexVector in = product_input(t1, t2);
      const ComplexVector f = lift(embedding, target * in);
      const ComplexMatrix rho = evolve(in);
      samples.push_back(f.dot(rho * f).real());
    }
  }
  return finish(samples, FidelityKind::two_qubit_avg);
}

ComplexMatrix SubspaceChannel::apply(const ComplexVector& logical) const {
  const std::size_t m = images.size();
  if (static_cast<std::size_t>(logical.size()) != m) throw std::invalid_argument("channel input");
  ComplexMatrix rho = ComplexMatrix::Zero(images[0][0].rows(), images[0][0].cols());
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      const Complex w = logical(static_cast<Eigen::Index>(j)) *
                        std::conj(logical(static_cast<Eigen::Index>(k)));
      if (w != Complex(0.0)) rho += w * images[j][k];
    }
  return rho;
}

double SubspaceChannel::overlap(const ComplexVector& logical_in,
                                const ComplexVector& logical_out) const {
  const ComplexVector f = embedding * logical_out;
  const std::size_t m = images.size();
  Complex acc = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      const Complex w = logical_in(static_cast<Eigen::Index>(j)) *
                        std::conj(logical_in(static_cast<Eigen::Index>(k)));
      if (w != Complex(0.0)) acc += w * f.dot(images[j][k] * f);
    }
  return acc.real();
}

FidelityReport single_qubit_gate_fidelity(const SubspaceChannel& channel,
                                          const ComplexMatrix& target, int n) {
  check_target(target, 2);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (double t : input_angles(n)) {
    const ComplexVector in = single_input(t);
    samples.push_back(channel.overlap(in, target * in));
  }
  return finish(samples, FidelityKind::single_qubit_avg);
}

FidelityReport two_qubit_gate_fidelity(const SubspaceChannel& channel, const ComplexMatrix& target,
                                       int n) {
  check_target(target, 4);
  const auto angles = input_angles(n);
  std::vector<double> samples;
  samples.reserve(angles.size() * angles.size());
  for (double t1 : angles) {
    for (double t2 : angles) {
      const ComplexVector in = product_input(t1, t2);
      samples.push_back(channel.overlap(in, target * in));
    }
  }
  return finish(samples, FidelityKind::two_qubit_avg);
}

FidelityReport two_qubit_gate_fidelity_pure(const ComplexMatrix& logical_block,
                                            const ComplexMatrix& target, int n) {
  check_target(target, 4);
  check_target(logical_block, 4);
  const auto angles = input_angles(n);
  std::vector<double> samples;
  samples.reserve(angles.size() * angles.size());
  for (double t1 : angles) {
    for (double t2 : angles) {
      const ComplexVector in = product_input(t1, t2);
      samples.push_back(std::norm((target * in).dot(logical_block * in)));
    }
  }
  return finish(samples, FidelityKind::two_qubit_avg);
}

PopulationSeries population_trace(const Trajectory& traj, const std::vector<std::string>& labels) {
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
  PopulationSeries out;
  out.times = traj.times;
  out.labels = labels;
  std::vector<Eigen::Index> idx;
  for (const auto& l : labels) idx.push_back(traj.states.front().index_of(l));
  out.values.assign(labels.size(), std::vector<double>(traj.states.size()));
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const QuantumState& s = traj.states[k];
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.values[i][k] = s.is_vector() ? std::norm(s.data()(idx[i], 0))
                                       : s.data()(idx[i], idx[i]).real();
    }
  }
  return out;
}

}  // namespace holo
