#include "cdlab/reactions.hpp"

#include <algorithm>
#include <cmath>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const ReactionFunction::Model& model) {
  std::visit(overloaded{
                 [](const ZeroReaction&) {},
                 [](const LogisticReaction& r) {
                   if (!std::isfinite(r.a) || !(r.b > 0.0) || !std::isfinite(r.b)) {
                     throw DomainError("logistic reaction needs finite a and b > 0");
                   }
                 },
                 [](const BilinearReaction& r) {
                   if (r.n1 < 2 || r.n2 < 2) throw DomainError("bilinear table needs >= 2x2 nodes");
                   if (r.values.size() != r.n1 * r.n2) {
                     throw DimensionError("bilinear table has " + std::to_string(r.values.size()) +
                                          " values, expected " + std::to_string(r.n1 * r.n2));
                   }
                   if (!(r.rho1_max > 0.0) || !(r.rho2_max > 0.0)) {
                     throw DomainError("bilinear table extents must be positive");
                   }
                   for (double v : r.values) {
                     if (!std::isfinite(v)) throw DomainError("bilinear table values must be finite");
                   }
                 },
             },
             model);
}

double bilinear(const BilinearReaction& t, double x, double y) {
  const double hx = t.rho1_max / static_cast<double>(t.n1 - 1);
  const double hy = t.rho2_max / static_cast<double>(t.n2 - 1);
  const double sx = std::clamp(x, 0.0, t.rho1_max) / hx;
  const double sy = std::clamp(y, 0.0, t.rho2_max) / hy;
  const std::size_t i = std::min(static_cast<std::size_t>(sx), t.n1 - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(sy), t.n2 - 2);
  const double fx = sx - static_cast<double>(i);
  const double fy = sy - static_cast<double>(j);
  const auto at = [&](std::size_t a, std::size_t b) { return t.values[a * t.n2 + b]; };
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
         (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

}  // namespace

ReactionFunction::ReactionFunction(Model model) : model_(std::move(model)) { validate(model_); }

double ReactionFunction::operator()(double rho1, double rho2) const {
  if (swapped_args_) std::swap(rho1, rho2);
  return std::visit(overloaded{
                        [](const ZeroReaction&) { return 0.0; },
                        [&](const LogisticReaction& r) {
                          const double s = std::min(rho1 + rho2, 2.0 * r.b);
                          return r.a * (1.0 - s / r.b);
                        },
                        [&](const BilinearReaction& r) { return bilinear(r, rho1, rho2); },
                    },
                    model_);
}

double ReactionFunction::sup_bound() const {
  return std::visit(overloaded{
                        [](const ZeroReaction&) { return 0.0; },
                        [](const LogisticReaction& r) { return std::abs(r.a); },
                        [](const BilinearReaction& r) {
                          double m = 0.0;
                          for (double v : r.values) m = std::max(m, std::abs(v));
                          return m;
                        },
                    },
                    model_);
}

double ReactionFunction::lipschitz_bound() const {
  return std::visit(overloaded{
                        [](const ZeroReaction&) { return 0.0; },
                        // sigma = rho1 + rho2, so each argument contributes |a|/b
                        [](const LogisticReaction& r) { return 2.0 * std::abs(r.a) / r.b; },
                        [](const BilinearReaction& r) {
                          const double hx = r.rho1_max / static_cast<double>(r.n1 - 1);
                          const double hy = r.rho2_max / static_cast<double>(r.n2 - 1);
                          double lx = 0.0, ly = 0.0;
                          for (std::size_t i = 0; i < r.n1; ++i) {
                            for (std::size_t j = 0; j < r.n2; ++j) {
                              const double v = r.values[i * r.n2 + j];
                              if (i + 1 < r.n1) {
                                lx = std::max(lx, std::abs(r.values[(i + 1) * r.n2 + j] - v) / hx);
                              }
                              if (j + 1 < r.n2) {
                                ly = std::max(ly, std::abs(r.values[i * r.n2 + j + 1] - v) / hy);
                              }
                            }
                          }
                          return lx + ly;
                        },
                    },
                    model_);
}

std::string ReactionFunction::name() const {
  return std::visit(overloaded{
                        [](const ZeroReaction&) { return std::string("zero"); },
                        [](const LogisticReaction&) { return std::string("logistic"); },
                        [](const BilinearReaction&) { return std::string("tabulated_bilinear"); },
                    },
                    model_);
}

ReactionFunction ReactionFunction::with_swapped_arguments() const {
  ReactionFunction f = *this;
  f.swapped_args_ = !swapped_args_;
  return f;
}

ReactionSpec ReactionSpec::make(ReactionFunction f1, ReactionFunction f2) {
  ReactionSpec s;
  s.lipschitz_bound = std::max(f1.lipschitz_bound(), f2.lipschitz_bound());
  s.sup_bound = std::max(f1.sup_bound(), f2.sup_bound());
  s.f1 = std::move(f1);
  s.f2 = std::move(f2);
  return s;
}

ReactionSpec ReactionSpec::swapped() const {
  return make(f2.with_swapped_arguments(), f1.with_swapped_arguments());
}

}  // namespace cdlab
