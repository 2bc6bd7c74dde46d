// Minimal tour: ground-state energy, one quench and its infinite-time averages.

#include <cstdio>

#include "erabi/erabi.hpp"

int main()
{
    erabi::ModelParams p;
    p.R = 100;
    p.lambda = 0.75;
    p.delta = 0.5;

    const auto gs = erabi::converged_ground_state(p);
    std::printf("ground state eps = %.6f (n_max %d)\n", gs.eps_gs, gs.n_max);

    const auto setup = erabi::prepare_quench(p);
    const auto avg = erabi::quench_averages(setup);
    std::printf("P = %.4f  Pq = %.4f  n = %.2f\n", avg.P, avg.Pq, avg.n);

    const auto rec = erabi::quench_record(setup, erabi::linear_time_grid(0.0, 20.0, 5));
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        std::printf("t = %5.1f  P = %.5f  Pq = %.5f\n", rec.times[i], rec.P[i], rec.Pq[i]);
    return 0;
}
