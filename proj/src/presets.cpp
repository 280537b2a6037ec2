#include "whittle/presets.hpp"

#include <stdexcept>

namespace whittle::presets {

SimConfig five_arms(char which) {
    struct Row {
        double rho0[5], rho1[5], p[5];
    };
    Row row;
    switch (which) {
        case 'a':
            row = {{0.07, 0.04, 0.05, 0.12, 0.99},
                   {0.71, 0.85, 0.77, 0.76, 0.88},
                   {0.09, 0.23, 0.23, 0.12, 0.27}};
            break;
        case 'b':
            row = {{0.02, 0.02, 0.11, 0.16, 0.19},
                   {0.64, 0.77, 0.74, 0.60, 0.76},
                   {0.06, 0.24, 0.10, 0.16, 0.15}};
            break;
        case 'c':
            row = {{0.07, 0.09, 0.01, 0.19, 0.04},
                   {0.63, 0.71, 0.66, 0.75, 0.77},
                   {0.29, 0.28, 0.03, 0.22, 0.18}};
            break;
        default:
            throw std::invalid_argument("five_arms expects 'a', 'b' or 'c'");
    }
    SimConfig c;
    for (int i = 0; i < 5; ++i) {
        ArmModel m;
        m.kind = i < 4 ? ArmKind::TypeA : ArmKind::TypeB;
        m.variant = ModelVariant::Base;
        m.p = row.p[i];
        m.rho0 = row.rho0[i];
        m.rho1 = row.rho1[i];
        m.validate();
        c.arms.push_back(m);
    }
    c.initial_beliefs.assign(5, 0.4);
    c.criterion = Criterion::discounted(0.99);
    c.horizon = 800;
    return c;
}

LearningConfig shared_rho1_learning() {
    LearningConfig lc;
    const double p[] = {0.15, 0.25, 0.25, 0.15, 0.15};
    const double rho0[] = {0.2, 0.2, 0.1, 0.1, 0.1};
    for (int i = 0; i < 5; ++i)
        lc.true_arms.push_back(i < 4 ? ArmModel::base(ArmKind::TypeA, p[i], rho0[i], 0.7)
                                     : ArmModel::base(ArmKind::TypeB, p[i], rho0[i], 0.7));
    std::vector<Candidate> grid;
    for (double gp : {0.15, 0.25})
        for (double gr : {0.1, 0.2}) grid.push_back(Candidate{gp, gr, 0.7});
    lc.grids.assign(5, grid);
    lc.criterion = Criterion::discounted(0.99);
    lc.base_policy = PolicyKind::Whittle;
    return lc;
}

}  // namespace whittle::presets
