// Walks through the non-asymptotically-periodic showcase map
// f(x) = x/2 + 1/4 on [0,1/2), x/2 - 1/4 on [1/2,1): the discontinuity is a
// left periodic singular point, no cycle certifies, and every orbit
// accumulates on 1/2.

#include <iostream>

#include "pwc/json_io.hpp"
#include "pwc/pwc.hpp"

int main() {
    using namespace pwc;
    MapSpec<Rational> spec;
    spec.a = {Rational(0), Rational(1, 2), Rational(1)};
    spec.b = {Rational(1, 4), Rational(-1, 4)};
    spec.lambda = Rational(1, 2);
    PwMap<Rational> map = build_map(spec);

    std::cout << "branches:\n" << map_to_json(map).dump(2) << "\n\n";

    Classification cls = classify_map(map, Budget{20000, 16, 4});
    std::cout << "classification:\n" << classification_to_json(cls).dump(2) << "\n\n";

    auto conn = detect_connection(map, 8);
    std::cout << "connection:\n" << connection_to_json(conn).dump(2) << "\n\n";

    EntropyProfile profile = entropy_profile(map, 10);
    std::cout << "n,alpha_n\n";
    for (const auto& row : profile.rows) std::cout << row.n << "," << row.alpha << "\n";
    return 0;
}
