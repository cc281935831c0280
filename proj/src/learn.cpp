#include "laso/learn.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace laso {

namespace {
constexpr double kDefaultC = 1.4142135623730951;  // sqrt(2)

double default_b(double alpha) { return std::sqrt(8.0) / alpha; }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
}

void check_margin(double margin) {
  if (!(margin > 0.0)) {
    throw std::invalid_argument("margin must be positive");
  }
}
}  // namespace

UpdateRule UpdateRule::alma(double alpha) {
  check_alpha(alpha);
  return UpdateRule{Kind::kAlma, alpha, default_b(alpha), kDefaultC};
}

UpdateRule UpdateRule::alma(double alpha, double b, double c) {
  check_alpha(alpha);
  if (!(b > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("penalty and step coefficients must be positive");
  }
  return UpdateRule{Kind::kAlma, alpha, b, c};
}

bool UpdateRule::analyzed_parameters() const {
  if (!is_alma()) return false;
  return std::abs(b - default_b(alpha)) <= 1e-12 * default_b(alpha) &&
         std::abs(c - kDefaultC) <= 1e-12 * kDefaultC;
}

double good_penalty(double alpha, double b, std::uint64_t k) {
  return (1.0 - alpha) * b / std::sqrt(static_cast<double>(k));
}

double bound_perceptron(double radius, double margin) {
  check_margin(margin);
  return (radius * radius) / (margin * margin);
}

double bound_alma(double alpha, double margin) {
  check_alpha(alpha);
  check_margin(margin);
  const double t = 2.0 / alpha - 1.0;
  return (2.0 / (margin * margin)) * t * t + 8.0 / alpha - 4.0;
}

double bound_perceptron_inseparable(double radius, double deficit, double margin) {
  check_margin(margin);
  const double s = radius + deficit;
  return (s * s) / (margin * margin);
}

double bound_alma_inseparable(double deficit, double margin, double c) {
  check_margin(margin);
  if (!(c > 0.0)) throw std::invalid_argument("step coefficient must be positive");
  const double rho = 1.0 / (c * margin * c * margin);
  const double dg = deficit / margin;
  return dg + rho * rho / 2.0 + rho * std::sqrt(rho * rho / 4.0 + dg + 1.0);
}

std::string TrainingReport::to_kv() const {
  std::ostringstream os;
  os << "examples=" << examples << '\n'
     << "epochs_run=" << epochs_run << '\n'
     << "total_updates=" << total_updates << '\n'
     << "converged=" << (converged ? 1 : 0) << '\n'
     << "averaged=" << (averaged ? 1 : 0) << '\n'
     << "final_norm=" << final_norm << '\n'
     << "final_generation=" << final_generation << '\n'
     << "feature_count=" << feature_count << '\n'
     << "wall_seconds=" << wall_seconds << '\n';
  os << "epoch_updates=";
  for (std::size_t i = 0; i < epoch_updates.size(); ++i) {
    if (i) os << ',';
    os << epoch_updates[i];
  }
  os << '\n';
  return os.str();
}

std::string TrainingReport::to_json() const {
  nlohmann::json j;
  j["examples"] = examples;
  j["epochs_run"] = epochs_run;
  j["total_updates"] = total_updates;
  j["converged"] = converged;
  j["averaged"] = averaged;
  j["final_norm"] = final_norm;
  j["final_generation"] = final_generation;
  j["feature_count"] = feature_count;
  j["wall_seconds"] = wall_seconds;
  j["epoch_updates"] = epoch_updates;
  return j.dump(2);
}

}  // namespace laso
