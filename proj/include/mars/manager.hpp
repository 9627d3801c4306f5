#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mars/policy.hpp"
#include "mars/reflection.hpp"

namespace mars {

// Optional predicate trigger: switches to the scenario whenever the
// system's power crosses the threshold.
struct ScenarioTrigger {
    enum class Kind { None, PowerAbove, PowerBelow };
    Kind kind = Kind::None;
    double threshold_w = 0.0;
};

// A named set of active policies. Exactly one scenario is active at a time;
// registered policies outside the set stay dormant (their windows keep
// aggregating).
struct Scenario {
    std::string name;
    std::vector<std::string> policies;
    ScenarioTrigger trigger;
};

struct TimedEvent {
    double time_ms = 0.0;
    std::string scenario;
};

// Composes policies and models: registration, scenario-driven activation
// and the scripted/predicate switches. Runtime state is mutated only by the
// coordinator between ticks.
class PolicyManager {
  public:
    struct PolicyEntry {
        std::shared_ptr<Policy> policy;
        bool active = true;
    };

    explicit PolicyManager(double tick_s);

    // Registers an active-capable policy. Throws DuplicateName and
    // InvalidPeriod (period not a positive multiple of the tick).
    void register_policy(std::shared_ptr<Policy> policy);

    // Registers a policy model for reflective queries only.
    void register_model(std::shared_ptr<Policy> model, double period_s);

    // Scenario policies must already be registered.
    void define_scenario(Scenario scenario);
    void set_initial_scenario(const std::string& name);
    void switch_scenario(const std::string& name);  // UnknownScenario; no-op if active
    const std::string& active_scenario() const { return active_scenario_; }

    void add_event(TimedEvent event);
    void load_events_csv(const std::string& text);

    // Fires every scripted event with time <= now, oldest first.
    void process_events_until(double now_s);
    // Evaluates predicate triggers against the last tick's system power.
    void check_power_trigger(double system_power_w);

    const std::vector<PolicyEntry>& policies() const { return policies_; }
    bool is_active(const std::string& policy_name) const;
    const ModelRegistry& models() const { return models_; }
    double tick_s() const { return tick_s_; }

    void set_migration_penalty_s(double penalty_s);
    double migration_penalty_s() const { return migration_penalty_s_; }

  private:
    const Scenario* find_scenario(const std::string& name) const;
    void apply_active_set();

    double tick_s_;
    std::vector<PolicyEntry> policies_;
    ModelRegistry models_;
    std::vector<Scenario> scenarios_;
    std::string active_scenario_;
    std::vector<TimedEvent> events_;
    size_t next_event_ = 0;
    double migration_penalty_s_ = 0.0;
};

// Manager configuration document (JSON):
//   {
//     "policies":  [{"name", "type", "period_ms", "params": {...}}, ...],
//     "models":    [{"name", "type", "period_ms", "params": {...}}, ...],
//     "scenarios": [{"name", "policies": [...],
//                    "trigger": {"power_above_w": X | "power_below_w": X}}, ...],
//     "initial_scenario": "...",
//     "events": [{"time_ms": T, "scenario": "..."}, ...],
//     "events_csv": "events.csv",          // rows: time_ms,event_name
//     "migration_penalty_ms": 0
//   }
// Everything but "policies" is optional. With no scenarios, all policies
// are active.
std::unique_ptr<PolicyManager> load_manager_config(const std::string& text, double tick_s);
std::unique_ptr<PolicyManager> load_manager_config_file(const std::string& path, double tick_s);

}  // namespace mars
