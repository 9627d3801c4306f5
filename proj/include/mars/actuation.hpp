#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mars/platform.hpp"

namespace mars {

// Committed actuator settings: one frequency per domain, one host core per
// live task.
struct ActuationState {
    std::vector<double> domain_freq_ghz;
    std::map<TaskId, CoreId> task_map;

    bool operator==(const ActuationState&) const = default;
};

// Owns the committed ActuationState and enforces range checks. Mutated only
// between simulator ticks by the coordinator.
class Actuator {
  public:
    explicit Actuator(const SysInfo& sys);

    // Sets a domain frequency. The value must exactly match an entry of the
    // domain's available frequencies (no snapping); OutOfRange otherwise.
    void set_frequency(DomainId d, double ghz);
    double frequency(DomainId d) const;

    // Maps a task to a core. Returns true when the task was already mapped
    // and the core changed (a migration). count_migration selects whether
    // the migration counter is bumped; initial placement passes false.
    bool map_task(TaskId task, CoreId core, bool count_migration);
    CoreId core_of(TaskId task) const;
    bool has_task(TaskId task) const;
    void remove_task(TaskId task);

    // Generic accessors mirroring the sense-style addressing.
    double actuation_val(ResourceId resource, ActuatorKind kind) const;
    std::vector<double> actuation_range(ResourceId resource, ActuatorKind kind) const;

    const ActuationState& state() const { return state_; }
    const SysInfo& sys() const { return *sys_; }
    std::uint64_t migrations() const { return migrations_; }

    // Validation helpers shared with the staged path.
    void check_frequency(DomainId d, double ghz) const;
    void check_task_mapping(TaskId task, CoreId core) const;

  private:
    const SysInfo* sys_;
    ActuationState state_;
    std::uint64_t migrations_ = 0;
};

// Hypothetical actuations staged by tryActuate. An overlay over the
// committed state; entries never leak into it. One instance exists per
// policy invocation and starts empty.
struct PredictionContext {
    std::map<DomainId, double> freq_ghz;
    std::map<TaskId, CoreId> task_map;

    bool empty() const { return freq_ghz.empty() && task_map.empty(); }
    void clear() {
        freq_ghz.clear();
        task_map.clear();
    }
};

// Staged writes with the same range checks as Actuator.
void try_actuate(PredictionContext& ctx, const Actuator& committed, ResourceId resource,
                 ActuatorKind kind, double value);

// Staged value if present, committed otherwise.
double try_actuation_val(const PredictionContext& ctx, const Actuator& committed,
                         ResourceId resource, ActuatorKind kind);

// Committed state with the overlay applied, for building prediction scratch
// state.
ActuationState apply_overlay(const ActuationState& base, const PredictionContext& ctx);

}  // namespace mars
