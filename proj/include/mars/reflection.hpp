#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "mars/actuation.hpp"
#include "mars/policy.hpp"
#include "mars/sensing.hpp"
#include "mars/trace.hpp"

namespace mars {

// Next-window workload estimate for one task. Persistence forecasting:
// descriptors equal those observed over the last completed window;
// demand_ips_ref is the task's consumption rate at the reference
// configuration when running alone (instructions per second).
struct TaskForecast {
    Descriptors desc;
    double demand_ips_ref = 0.0;
};

using WorkloadForecast = std::map<TaskId, TaskForecast>;

// Registered policy models, ascending by period. The baseline
// performance/power model is implicit and runs at the simulator tick, the
// finest period in the hierarchy; policy-model periods must be integer
// multiples of the tick and pairwise nested.
class ModelRegistry {
  public:
    struct Entry {
        std::shared_ptr<Policy> model;
        std::uint64_t period_ticks = 0;
    };

    explicit ModelRegistry(double tick_s);

    // Throws InvalidPeriod (not a positive multiple of the tick, or not
    // nested with existing entries) and DuplicateModel (an actuator kind
    // already modeled).
    void register_model(std::shared_ptr<Policy> model, double period_s);

    const std::vector<Entry>& entries() const { return entries_; }
    double tick_s() const { return tick_s_; }

  private:
    std::vector<Entry> entries_;
    double tick_s_;
};

// Inputs the platform runtime supplies for one reflective query.
struct ReflectionQuery {
    const SysInfo* sys = nullptr;
    const Actuator* committed = nullptr;
    const WorkloadForecast* forecast = nullptr;  // null: nothing observed yet
    double tick_s = 0.0;
    double ref_freq_ghz = 0.0;
    std::uint64_t policy_period_ticks = 0;
    double base_time_s = 0.0;
    // Last completed real window per registry entry; null when a model's
    // window has not completed yet.
    std::vector<const SenseData*> model_seeds;
};

// Answers senseIf queries: simulates the horizon tick by tick on scratch
// state (committed actuations overlaid with the staged ones), executing
// every registered policy model at multiples of its period and the baseline
// model every tick. Leaves committed state, sensing windows and trace
// cursors untouched.
class ReflectionEngine {
  public:
    explicit ReflectionEngine(const ModelRegistry& registry) : registry_(&registry) {}

    double sense_if(const ReflectionQuery& q, const PredictionContext& staged,
                    ResourceId resource, SensorKind kind, double horizon_s) const;

    TaskPrediction predict_task_performance(const ReflectionQuery& q,
                                            const PredictionContext& staged, TaskId task) const;

    // Policy-model executions plus baseline evaluations of the most recent
    // query: sum over models of horizon / period.
    std::uint64_t last_query_model_executions() const { return last_query_executions_; }

  private:
    struct Prediction {
        SenseData horizon;
        ActuationState initial_state;
    };

    Prediction simulate(const ReflectionQuery& q, const PredictionContext& staged,
                        std::uint64_t horizon_ticks) const;
    std::uint64_t check_query(const ReflectionQuery& q, double horizon_s) const;

    const ModelRegistry* registry_;
    mutable std::uint64_t last_query_executions_ = 0;
};

}  // namespace mars
