#pragma once

#include <random>
#include <vector>

#include "dualsrc/cost.hpp"
#include "dualsrc/demand.hpp"

namespace testutil {

// demand {0: .5, 2: .5} on the given lattice step
inline dualsrc::DemandDistribution coin_demand(double step = 1.0) {
    return dualsrc::make_demand(step, {{0.0, 0.5}, {2.0, 0.5}});
}

// h = b = c_E = 1, c_R = 0, L0 = 0 on the coin demand
inline dualsrc::Instance reference_instance(int L = 6, double step = 1.0) {
    return dualsrc::make_instance(1.0, 1.0, 0.0, 1.0, L, 0, coin_demand(step));
}

// Random instance generator for property suites: integer lattice, 2..4 atoms
// with values in {0..3}, costs in sane ranges, L0 in {0,1,2}.
inline dualsrc::Instance random_instance(std::mt19937_64& eng, int L0_max = 2) {
    std::uniform_int_distribution<int> n_atoms(2, 4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = n_atoms(eng);
    std::vector<int> values{0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(values[static_cast<std::size_t>(i)],
                                          values[static_cast<std::size_t>(static_cast<int>(eng() % (i + 1)))]);
    values.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<double, double>> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = 0.1 + unif(eng);
        atoms.emplace_back(static_cast<double>(values[static_cast<std::size_t>(i)]), w);
        total += w;
    }
    for (auto& a : atoms) a.second /= total;
    const double h = 0.5 + 3.5 * unif(eng);
    const double b = 0.5 + 3.5 * unif(eng);
    const double c_R = unif(eng) < 0.5 ? 0.0 : unif(eng);
    const double c = 0.2 + 1.8 * unif(eng);
    const int L0 = static_cast<int>(eng() % static_cast<std::uint64_t>(L0_max + 1));
    const int L = L0 + 2 + static_cast<int>(eng() % 4);
    return dualsrc::make_instance(h, b, c_R, c_R + c, L, L0, dualsrc::make_demand(1.0, atoms));
}

}  // namespace testutil
