#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mars/platform.hpp"

namespace mars {

struct TaskPrediction {
    double ips = 0.0;
    double power_share_w = 0.0;
};

// Everything a policy may touch during one invocation. The platform backend
// provides the implementation; the same policy code runs unchanged against
// a live loop context or a reflective model context (is_model() == true,
// where actuate() throws ModelMayNotActuate and staging via try_actuate()
// feeds the prediction instead).
//
// A context is valid only for the duration of the invocation; policies must
// not retain references to it.
class PolicyContext {
  public:
    virtual ~PolicyContext() = default;

    virtual const SysInfo& sys_info() const = 0;
    virtual double period_s() const = 0;
    virtual double now_s() const = 0;
    virtual bool is_model() const = 0;
    virtual std::vector<TaskId> live_tasks() const = 0;

    // Sensing over this policy's most recently completed window.
    virtual double sense(ResourceId resource, SensorKind kind) const = 0;

    // Committed actuation.
    virtual void actuate(ResourceId resource, ActuatorKind kind, double value) = 0;
    virtual double actuation_val(ResourceId resource, ActuatorKind kind) const = 0;
    virtual std::vector<double> actuation_range(ResourceId resource, ActuatorKind kind) const = 0;

    // Hypothetical actuation, visible only to sense_if/try_actuation_val
    // within this invocation.
    virtual void try_actuate(ResourceId resource, ActuatorKind kind, double value) = 0;
    virtual double try_actuation_val(ResourceId resource, ActuatorKind kind) const = 0;
    virtual void clear_staged() = 0;

    // Predicted value of `kind` over the next window of length horizon_s
    // (which must equal this policy's period), given the staged actuations.
    virtual double sense_if(ResourceId resource, SensorKind kind, double horizon_s) const = 0;
    double sense_if(ResourceId resource, SensorKind kind) const {
        return sense_if(resource, kind, period_s());
    }
    virtual TaskPrediction predict_task_performance(TaskId task) const = 0;
};

// Base class for resource management policies. Subclasses implement
// execute(), which runs once per sensing-window close when the policy is
// active, and once per model period inside reflective queries when
// registered as a model.
class Policy {
  public:
    Policy(std::string name, double period_s) : name_(std::move(name)), period_s_(period_s) {}
    virtual ~Policy() = default;

    virtual void execute(PolicyContext& ctx) = 0;

    // Actuator kinds this policy drives; used to reject duplicate models of
    // the same actuator.
    virtual std::vector<ActuatorKind> modeled_actuators() const { return {}; }

    const std::string& name() const { return name_; }
    double period_s() const { return period_s_; }

  private:
    std::string name_;
    double period_s_;
};

}  // namespace mars
