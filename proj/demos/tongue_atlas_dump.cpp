// Emits the rational tongue atlas over a lambda grid as CSV, ready for a
// parameter-plane plot: one closed b-interval per (lambda, p/q).

#include <iostream>

#include "pwc/json_io.hpp"
#include "pwc/pwc.hpp"

int main(int argc, char** argv) {
    using namespace pwc;
    int q_max = argc > 1 ? std::atoi(argv[1]) : 5;
    int grid = argc > 2 ? std::atoi(argv[2]) : 40;
    std::vector<Rational> lambdas;
    for (int j = 1; j < grid; ++j) lambdas.emplace_back(j, grid);
    std::cout << atlas_to_csv(tongue_atlas(q_max, lambdas));
    return 0;
}
