#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace cdlab {

struct ZeroReaction {};

/// a (1 - min(sigma, 2b) / b) with sigma = rho1 + rho2: bounded by |a|, Lipschitz |a| / b.
struct LogisticReaction {
  double a = 1.0;
  double b = 1.0;
};

/// Bilinear interpolation of a table over [0, rho1_max] x [0, rho2_max]; inputs outside
/// the box are clamped onto it. values are row-major with n2 entries per row.
struct BilinearReaction {
  double rho1_max = 1.0;
  double rho2_max = 1.0;
  std::size_t n1 = 2;
  std::size_t n2 = 2;
  std::vector<double> values;
};

/// A bounded, Lipschitz reaction rate F(rho1, rho2).
class ReactionFunction {
 public:
  using Model = std::variant<ZeroReaction, LogisticReaction, BilinearReaction>;

  ReactionFunction() = default;
  explicit ReactionFunction(Model model);

  double operator()(double rho1, double rho2) const;
  double sup_bound() const;
  double lipschitz_bound() const;
  bool is_zero() const noexcept { return std::holds_alternative<ZeroReaction>(model_); }
  std::string name() const;
  /// F with its arguments exchanged, as seen by the other species after a swap.
  ReactionFunction with_swapped_arguments() const;

 private:
  Model model_;
  bool swapped_args_ = false;
};

/// Per-species reaction rates for the source terms rho_i F_i(rho1, rho2).
struct ReactionSpec {
  ReactionFunction f1;
  ReactionFunction f2;
  double lipschitz_bound = 0.0;
  double sup_bound = 0.0;

  static ReactionSpec make(ReactionFunction f1, ReactionFunction f2);
  ReactionSpec swapped() const;
};

}  // namespace cdlab
