#include <cmath>

#include "dpwaves/wave_analysis.hpp"

namespace dpwaves {

std::vector<CusponCase> cuspon_test_suite(double half_width, int cells) {
  using std::exp;
  using std::sin;
  using std::cos;
  using std::tanh;
  using std::cosh;
  std::vector<CusponCase> out;
  auto add = [&](std::string name, bool odd, double slope, auto f) {
    out.push_back({std::move(name), odd, 2.0 * slope, sample_test_function(f, half_width, cells)});
  };
  add("x exp(-x^2)", true, 1.0, [](auto x) { return x * exp(-x * x); });
  add("sin(3x) exp(-x^2)", true, 3.0, [](auto x) { return sin(3.0 * x) * exp(-x * x); });
  add("tanh(x) exp(-x^2)", true, 1.0, [](auto x) { return tanh(x) * exp(-x * x); });
  add("x (1 + x^2) exp(-x^2/2)", true, 1.0, [](auto x) { return x * (1.0 + x * x) * exp(-0.5 * x * x); });
  add("2x exp(-x^4)", true, 2.0, [](auto x) { return 2.0 * x * exp(-x * x * x * x); });
  add("exp(-x^2)", false, 0.0, [](auto x) { return exp(-x * x); });
  add("cos(x) exp(-x^2)", false, 0.0, [](auto x) { return cos(x) * exp(-x * x); });
  add("(1 + x^2) exp(-x^2)", false, 0.0, [](auto x) { return (1.0 + x * x) * exp(-x * x); });
  add("exp(-x^4)", false, 0.0, [](auto x) { return exp(-x * x * x * x); });
  add("cosh(x/2) exp(-x^2)", false, 0.0, [](auto x) { return cosh(0.5 * x) * exp(-x * x); });
  return out;
}

}  // namespace dpwaves
