#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mars/policy.hpp"

namespace mars {

// Reflective DVFS policy: per frequency domain, stages every available
// frequency, scores it by predicted energy efficiency (IPS per watt over
// the next window) and commits the argmax. Ties break toward the lower
// frequency. Skips an epoch (keeping the current frequency) when no
// forecast is available yet.
class SimpleDvfsPolicy : public Policy {
  public:
    SimpleDvfsPolicy(std::string name, double period_s);

    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;

  protected:
    // Called after each committed domain decision; test hook.
    virtual void on_decision(DomainId domain, double chosen_ghz, double predicted_ips,
                             double predicted_power_w);
};

// Load-threshold DVFS governor in the style of the kernel's ondemand:
// jumps to the maximum frequency when any member core's utilization
// reaches the threshold, otherwise picks the smallest frequency that keeps
// the projected utilization below it. Usable both as an active policy and
// as a registered model (it stages instead of actuating under a model
// context).
class OndemandGovernor : public Policy {
  public:
    OndemandGovernor(std::string name, double period_s, double up_threshold = 0.8);

    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;

    double target_frequency(double u_max, double f_current,
                            const std::vector<double>& freqs) const;

  private:
    double up_threshold_;
};

// Reflective task mapping: greedily revisits tasks in descending
// last-window instruction count and migrates a task when the predicted
// system efficiency of the best candidate core beats staying by more than
// the hysteresis margin. Candidate cores are the least-loaded core of each
// core type.
class ReflectiveMappingPolicy : public Policy {
  public:
    ReflectiveMappingPolicy(std::string name, double period_s, double hysteresis = 0.01);

    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;

  private:
    double hysteresis_;
};

// Threshold migration baseline: a task whose utilization share reaches
// up_threshold moves to the least-loaded core of the fastest type; a task
// on the fastest type whose share drops to down_threshold moves back to
// the least-loaded core of the slowest type. No admission control.
class GtsBaselinePolicy : public Policy {
  public:
    GtsBaselinePolicy(std::string name, double period_s, double up_threshold = 0.9,
                      double down_threshold = 0.3);

    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;

  private:
    double up_threshold_;
    double down_threshold_;
};

// Pins every domain to its lowest (MinPowerPolicy) or highest
// (MaxPerfPolicy) frequency each epoch.
class MinPowerPolicy : public Policy {
  public:
    MinPowerPolicy(std::string name, double period_s);
    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;
};

class MaxPerfPolicy : public Policy {
  public:
    MaxPerfPolicy(std::string name, double period_s);
    void execute(PolicyContext& ctx) override;
    std::vector<ActuatorKind> modeled_actuators() const override;
};

// Policy factory used by the manager configuration loader and the CLI.
struct PolicyTypeInfo {
    std::string type;
    std::string summary;
};

const std::vector<PolicyTypeInfo>& policy_catalog();

std::shared_ptr<Policy> make_policy(const std::string& type, const std::string& name,
                                    double period_s,
                                    const std::map<std::string, double>& params);

}  // namespace mars
