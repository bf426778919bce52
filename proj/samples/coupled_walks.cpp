// Couples two-cookie walks with p = 0.6 and p = 0.9 through shared uniforms
// and prints where each pair ends up and whether every verifier held.

#include <cstdint>
#include <iostream>

#include "arrowwalk.hpp"

int main() {
  namespace aw = arrowwalk;
  const auto slow = aw::CookieEnvironment::homogeneous({0.6, 0.6});
  const auto fast = aw::CookieEnvironment::homogeneous({0.9, 0.9});
  const aw::UniformField field(2024);

  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    const auto pair = aw::couple_shared_uniform(slow, fast, field, stream, 5000);
    bool ok = true;
    for (const auto& r : aw::verify_all(pair)) ok = ok && r.passed;
    std::cout << "stream " << stream << ": L_T=" << pair.left.final_position()
              << " R_T=" << pair.right.final_position() << " max R=" << pair.right.max_position()
              << (ok ? "  all checks hold\n" : "  CHECK FAILED\n");
  }

  const auto ms = aw::ce1_milestones(3, 6);
  std::cout << "\nspeed counterexample, N=3\n";
  for (const auto& m : ms) {
    std::cout << "  k=" << m.k << " x_k=" << m.x << " t_k=" << m.t << " s_k=" << m.s << " x_k/t_k=" << m.ratio_hi
              << "\n";
  }
}
