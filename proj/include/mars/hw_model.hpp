#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mars/platform.hpp"
#include "mars/trace.hpp"

namespace mars {

// Seconds per instruction of a task with the given descriptors on a core of
// the given type at freq_ghz:
//   spi = cpi_scale * cpi_base_ref / (freq_ghz * 1e9) + mpi * mem_latency_s
double seconds_per_instruction(const Descriptors& desc, double cpi_scale, double freq_ghz,
                               double mem_latency_s);

// Utilization-interpolated core power (watts):
//   P = u * (a * f^3 + b) + (1 - u) * idle
double core_power_w(const CoreType& type, double freq_ghz, double utilization);

struct TaskDemand {
    TaskId id = 0;
    double demand_s = 0.0;  // <= window
};

struct TaskShare {
    TaskId id = 0;
    double runtime_s = 0.0;
};

// Proportional fair share by water-filling: repeatedly grant each
// unsatisfied task min(fair share, demand) and redistribute the slack until
// a fixed point. Implemented as one pass over demands in ascending order,
// which reaches the same fixed point. Returns shares in ascending task-id
// order; the sum never exceeds window_s.
std::vector<TaskShare> schedule_core(std::vector<TaskDemand> demands, double window_s);

// Work a core has to run for one evaluation span. remaining_instructions
// bounds consumption (pass infinity when unbounded); demand_cap_s bounds
// the runtime the task asks for within the span (infinity = fully busy);
// unavailable_s carves time out of the span for this task (migration cost).
struct TaskWork {
    TaskId id = 0;
    Descriptors desc;
    double remaining_instructions = 0.0;
    double demand_cap_s = 0.0;
    double unavailable_s = 0.0;
};

struct TaskRun {
    TaskId id = 0;
    double runtime_s = 0.0;
    std::uint64_t instructions = 0;
};

struct CoreEval {
    double busy_s = 0.0;
    double utilization = 0.0;
    double power_w = 0.0;
    std::vector<TaskRun> tasks;  // ascending task id
};

// One closed-form evaluation of a core over span_s: per-task spi, demands,
// water-filling allocation, instruction counts (rounded to whole
// instructions, never past remaining_instructions), utilization and power.
// The simulator's tick and the reflective predictor both run through here,
// so predictions and measurements share arithmetic exactly.
CoreEval evaluate_core(const CoreType& type, double freq_ghz, double mem_latency_s,
                       double span_s, std::span<const TaskWork> work);

}  // namespace mars
