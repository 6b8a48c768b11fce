// Assembles mass and stiffness matrices on a skewed pyramid and prints a few
// diagnostics. Build target: mass_matrix_example.

#include "bbpyr/bbpyr.hpp"

#include <cstdio>

int main()
{
    using namespace bbpyr;

    VertexPyramid p{{{{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, {2.2, 1.8, 0.1}, {0.0, 2.0, 0.0}, {0.9, 1.1, 1.5}}}};
    const int order = 3;
    const int nq = default_nq(order);

    const auto mass = mass_matrix(order, p, nq);
    const auto stiff = stiffness_matrix(order, p, nq);
    const auto part = dirichlet_partition(order, Shape::pyramid);
    const auto interior = restrict_matrix(stiff, part);

    std::printf("order %d, %zu basis functions, %zu interior\n", order, pyramid_dimension(order), part.interior.size());
    std::printf("affine map: %s\n", is_affine(p) ? "yes" : "no");
    std::printf("volume (sum of mass entries): %.15f\n", mass.entries.sum());
    std::printf("cond(mass) = %.6e\n", *condition_number(mass).cond);
    std::printf("cond(interior stiffness) = %.6e\n", *condition_number(interior).cond);

    const auto values = pyramid_eval_rst(order, {0.2, 0.3, 0.25});
    double sum = 0.0;
    for (const double v : values) sum += v;
    std::printf("basis sum at (0.2, 0.3, 0.25): %.17g\n", sum);
    return 0;
}
