// Builds the degree-2 interior rule for W(1,1,1) from the common zeros of
// three quasi-orthogonal polynomials, prints it as an interior-rule file,
// and reports the degree-5 rule it produces.

#include <iostream>

#include "example1_polynomials.hpp"
#include "trilobatto/trilobatto.hpp"

int main() {
  using namespace trilobatto;
  const JacobiExponents constant{0, 0, 0};
  try {
    const auto nodes = common_zeros(samples::example1_polynomials(), 3);
    const InteriorRule step1 = weights_from_nodes(nodes, 2, constant.bubble());
    std::cout << io::dump(io::to_json(step1));

    const TriangleRule rule = build_lobatto(step1, constant);
    const AuditReport a = audit(rule);
    std::cerr << "nodes " << rule.node_count() << ", max relative error "
              << a.exactness.max_error << ", conforming " << a.conforming << "\n";
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  }
  return 0;
}
