#ifndef AIRDROP_TECHNOLOGY_HPP
#define AIRDROP_TECHNOLOGY_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace airdrop {

enum class TechnologyKind { threshold, linear, quadratic, sshaped, concave, table, general };

std::string_view to_string(TechnologyKind kind);
TechnologyKind technology_kind_from_string(std::string_view name);

using ProfileValueFn = std::function<double(std::span<const double>)>;

// Declarative description of a technology function V. Only the fields that
// belong to `kind` are meaningful; the named constructors fill them in.
struct TechnologySpec {
  TechnologyKind kind = TechnologyKind::threshold;
  double tau = 1.0;
  double v_low = 0.0;
  double v_high = 1.0;
  double lambda_v = 1.0;
  double c = 1.0;
  std::vector<double> table;
  ProfileValueFn general;

  static TechnologySpec threshold(int tau, double v_low, double v_high);
  static TechnologySpec linear(double lambda_v);
  static TechnologySpec quadratic(double tau);
  static TechnologySpec sshaped(double tau, double c);
  static TechnologySpec concave(double tau, double c);
  static TechnologySpec from_table(std::vector<double> values);
  static TechnologySpec from_function(ProfileValueFn fn);
};

// A validated technology for a fixed player count. Anonymous kinds depend on
// the profile only through the contribution level l = sum_i a_i.
class Technology {
 public:
  Technology(const TechnologySpec& spec, int n);

  TechnologyKind kind() const { return spec_.kind; }
  const TechnologySpec& spec() const { return spec_; }
  int players() const { return n_; }
  bool is_anonymous() const { return spec_.kind != TechnologyKind::general; }

  // V(l) for an integer level in [0, n].
  double eval_anonymous(int ell) const;

  // V(l) for a real-valued level, as produced by non-binary action grids.
  // Closed-form kinds accept any l >= 0; tables need an integer l <= n.
  double eval_level(double ell) const;

  double eval_profile(std::span<const double> profile) const;

  // Smallest s with V(l+1) - V(l) <= s for every l in [l1, l2 - 1]. Returns 0
  // when the interval holds no step.
  double steepness(int l1, int l2) const;

 private:
  double closed_form(double ell) const;

  TechnologySpec spec_;
  int n_;
};

inline Technology make_technology(const TechnologySpec& spec, int n) { return Technology(spec, n); }

}  // namespace airdrop

#endif  // AIRDROP_TECHNOLOGY_HPP
