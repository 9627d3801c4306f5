#include "mars/hw_model.hpp"

#include <algorithm>
#include <cmath>

namespace mars {

double seconds_per_instruction(const Descriptors& desc, double cpi_scale, double freq_ghz,
                               double mem_latency_s) {
    return cpi_scale * desc.cpi_base_ref / (freq_ghz * 1e9) + desc.mpi * mem_latency_s;
}

double core_power_w(const CoreType& type, double freq_ghz, double utilization) {
    double active = type.dyn_coeff_w_per_ghz3 * freq_ghz * freq_ghz * freq_ghz + type.static_active_w;
    return utilization * active + (1.0 - utilization) * type.idle_w;
}

std::vector<TaskShare> schedule_core(std::vector<TaskDemand> demands, double window_s) {
    // Ascending demand, ties by id for a deterministic float path.
    std::sort(demands.begin(), demands.end(), [](const TaskDemand& a, const TaskDemand& b) {
        if (a.demand_s != b.demand_s) return a.demand_s < b.demand_s;
        return a.id < b.id;
    });
    std::vector<TaskShare> shares;
    shares.reserve(demands.size());
    double remaining = window_s;
    size_t left = demands.size();
    for (const TaskDemand& d : demands) {
        double fair = remaining / static_cast<double>(left);
        double grant = std::min(d.demand_s, fair);
        grant = std::max(grant, 0.0);
        shares.push_back(TaskShare{d.id, grant});
        remaining -= grant;
        --left;
    }
    std::sort(shares.begin(), shares.end(),
              [](const TaskShare& a, const TaskShare& b) { return a.id < b.id; });
    return shares;
}

CoreEval evaluate_core(const CoreType& type, double freq_ghz, double mem_latency_s,
                       double span_s, std::span<const TaskWork> work) {
    CoreEval eval;
    if (work.empty()) {
        eval.power_w = core_power_w(type, freq_ghz, 0.0);
        return eval;
    }

    std::vector<double> spi(work.size());
    std::vector<TaskDemand> demands;
    demands.reserve(work.size());
    for (size_t i = 0; i < work.size(); ++i) {
        const TaskWork& w = work[i];
        spi[i] = seconds_per_instruction(w.desc, type.cpi_scale, freq_ghz, mem_latency_s);
        double avail = std::max(span_s - w.unavailable_s, 0.0);
        double d = std::min({w.remaining_instructions * spi[i], w.demand_cap_s, avail});
        demands.push_back(TaskDemand{static_cast<TaskId>(i), d});
    }

    std::vector<TaskShare> shares = schedule_core(std::move(demands), span_s);

    eval.tasks.reserve(work.size());
    for (const TaskShare& s : shares) {
        const TaskWork& w = work[s.id];
        double instr = s.runtime_s / spi[s.id];
        instr = std::min(instr, w.remaining_instructions);
        std::uint64_t count = instr >= 0.0 ? static_cast<std::uint64_t>(std::llround(instr)) : 0;
        if (std::isfinite(w.remaining_instructions))
            count = std::min(count, static_cast<std::uint64_t>(w.remaining_instructions));
        eval.tasks.push_back(TaskRun{w.id, s.runtime_s, count});
        eval.busy_s += s.runtime_s;
    }
    std::sort(eval.tasks.begin(), eval.tasks.end(),
              [](const TaskRun& a, const TaskRun& b) { return a.id < b.id; });

    eval.busy_s = std::min(eval.busy_s, span_s);
    eval.utilization = eval.busy_s / span_s;
    eval.power_w = core_power_w(type, freq_ghz, eval.utilization);
    return eval;
}

}  // namespace mars
