#include "mars/policies.hpp"

#include <algorithm>
#include <limits>

#include "mars/errors.hpp"

namespace mars {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it != params.end() ? it->second : fallback;
}

double sensed_or(const PolicyContext& ctx, ResourceId resource, SensorKind kind,
                 double fallback) {
    try {
        return ctx.sense(resource, kind);
    } catch (const UnknownResource&) {
        return fallback;
    }
}

// Least-loaded core of the given type by last-window busy time, ties toward
// the lower core id.
CoreId least_loaded_core(const PolicyContext& ctx, TypeId type) {
    const SysInfo& sys = ctx.sys_info();
    CoreId best = -1;
    double best_load = std::numeric_limits<double>::infinity();
    for (const CoreInfo& core : sys.cores()) {
        if (core.type != type) continue;
        double load = ctx.sense(core_rid(core.id), SensorKind::BusyTimeSec);
        if (load < best_load) {
            best_load = load;
            best = core.id;
        }
    }
    return best;
}

TypeId fastest_type(const SysInfo& sys) {
    TypeId best = 0;
    for (TypeId t = 1; t < static_cast<TypeId>(sys.core_types().size()); ++t)
        if (sys.core_types()[t].cpi_scale < sys.core_types()[best].cpi_scale) best = t;
    return best;
}

TypeId slowest_type(const SysInfo& sys) {
    TypeId best = 0;
    for (TypeId t = 1; t < static_cast<TypeId>(sys.core_types().size()); ++t)
        if (sys.core_types()[t].cpi_scale > sys.core_types()[best].cpi_scale) best = t;
    return best;
}

// Predicted whole-system efficiency under the currently staged actuations.
double predicted_system_efficiency(const PolicyContext& ctx) {
    double ips = 0.0;
    double power = 0.0;
    for (int d = 0; d < ctx.sys_info().num_domains(); ++d) {
        ips += ctx.sense_if(domain_rid(d), SensorKind::IPS);
        power += ctx.sense_if(domain_rid(d), SensorKind::PowerWatts);
    }
    return power > 0.0 ? ips / power : 0.0;
}

}  // namespace

SimpleDvfsPolicy::SimpleDvfsPolicy(std::string name, double period_s)
    : Policy(std::move(name), period_s) {}

std::vector<ActuatorKind> SimpleDvfsPolicy::modeled_actuators() const {
    return {ActuatorKind::Frequency};
}

void SimpleDvfsPolicy::on_decision(DomainId, double, double, double) {}

void SimpleDvfsPolicy::execute(PolicyContext& ctx) {
    for (int d = 0; d < ctx.sys_info().num_domains(); ++d) {
        ctx.clear_staged();
        const std::vector<double> freqs =
            ctx.actuation_range(domain_rid(d), ActuatorKind::Frequency);
        double best_f = 0.0;
        double best_eff = -1.0;
        double best_ips = 0.0;
        double best_power = 0.0;
        try {
            for (double f : freqs) {
                ctx.try_actuate(domain_rid(d), ActuatorKind::Frequency, f);
                double ips = ctx.sense_if(domain_rid(d), SensorKind::IPS);
                double power = ctx.sense_if(domain_rid(d), SensorKind::PowerWatts);
                double eff = power > 0.0 ? ips / power : 0.0;
                if (eff > best_eff) {
                    best_eff = eff;
                    best_f = f;
                    best_ips = ips;
                    best_power = power;
                }
            }
        } catch (const NoForecast&) {
            ctx.clear_staged();
            continue;  // keep the current frequency this epoch
        }
        ctx.clear_staged();
        ctx.actuate(domain_rid(d), ActuatorKind::Frequency, best_f);
        on_decision(d, best_f, best_ips, best_power);
    }
}

OndemandGovernor::OndemandGovernor(std::string name, double period_s, double up_threshold)
    : Policy(std::move(name), period_s), up_threshold_(up_threshold) {}

std::vector<ActuatorKind> OndemandGovernor::modeled_actuators() const {
    return {ActuatorKind::Frequency};
}

double OndemandGovernor::target_frequency(double u_max, double f_current,
                                          const std::vector<double>& freqs) const {
    if (u_max >= up_threshold_) return freqs.back();
    for (double f : freqs)
        if (u_max * f_current <= up_threshold_ * f) return f;
    return freqs.back();
}

void OndemandGovernor::execute(PolicyContext& ctx) {
    const SysInfo& sys = ctx.sys_info();
    for (int d = 0; d < sys.num_domains(); ++d) {
        double u_max = 0.0;
        for (CoreId c : sys.cores_in_domain(d)) {
            double u = ctx.sense(core_rid(c), SensorKind::BusyTimeSec) / ctx.period_s();
            u_max = std::max(u_max, u);
        }
        double f_current = ctx.actuation_val(domain_rid(d), ActuatorKind::Frequency);
        double target =
            target_frequency(u_max, f_current, ctx.actuation_range(domain_rid(d),
                                                                   ActuatorKind::Frequency));
        if (ctx.is_model())
            ctx.try_actuate(domain_rid(d), ActuatorKind::Frequency, target);
        else
            ctx.actuate(domain_rid(d), ActuatorKind::Frequency, target);
    }
}

ReflectiveMappingPolicy::ReflectiveMappingPolicy(std::string name, double period_s,
                                                 double hysteresis)
    : Policy(std::move(name), period_s), hysteresis_(hysteresis) {}

std::vector<ActuatorKind> ReflectiveMappingPolicy::modeled_actuators() const {
    return {ActuatorKind::TaskCoreMap};
}

void ReflectiveMappingPolicy::execute(PolicyContext& ctx) {
    const SysInfo& sys = ctx.sys_info();
    std::vector<TaskId> tasks = ctx.live_tasks();
    if (tasks.empty()) return;

    // Heaviest tasks first; ties toward the lower id.
    std::vector<std::pair<double, TaskId>> order;
    order.reserve(tasks.size());
    for (TaskId t : tasks)
        order.emplace_back(-sensed_or(ctx, task_rid(t), SensorKind::InstructionsRetired, 0.0), t);
    std::sort(order.begin(), order.end());

    for (const auto& [neg_instr, task] : order) {
        try {
            ctx.clear_staged();
            double stay_score = predicted_system_efficiency(ctx);
            CoreId current =
                static_cast<CoreId>(ctx.actuation_val(task_rid(task), ActuatorKind::TaskCoreMap));

            CoreId best_core = current;
            double best_score = stay_score;
            for (TypeId type = 0; type < static_cast<TypeId>(sys.core_types().size()); ++type) {
                CoreId candidate = least_loaded_core(ctx, type);
                if (candidate < 0 || candidate == current) continue;
                ctx.clear_staged();
                ctx.try_actuate(task_rid(task), ActuatorKind::TaskCoreMap,
                                static_cast<double>(candidate));
                double score = predicted_system_efficiency(ctx);
                if (score > best_score) {
                    best_score = score;
                    best_core = candidate;
                }
            }
            ctx.clear_staged();
            if (best_core != current && best_score > stay_score * (1.0 + hysteresis_))
                ctx.actuate(task_rid(task), ActuatorKind::TaskCoreMap,
                            static_cast<double>(best_core));
        } catch (const NoForecast&) {
            ctx.clear_staged();
            return;  // skip this epoch
        }
    }
}

GtsBaselinePolicy::GtsBaselinePolicy(std::string name, double period_s, double up_threshold,
                                     double down_threshold)
    : Policy(std::move(name), period_s),
      up_threshold_(up_threshold),
      down_threshold_(down_threshold) {}

std::vector<ActuatorKind> GtsBaselinePolicy::modeled_actuators() const {
    return {ActuatorKind::TaskCoreMap};
}

void GtsBaselinePolicy::execute(PolicyContext& ctx) {
    const SysInfo& sys = ctx.sys_info();
    TypeId big = fastest_type(sys);
    TypeId little = slowest_type(sys);
    if (big == little) return;  // homogeneous platform

    for (TaskId task : ctx.live_tasks()) {
        double busy = sensed_or(ctx, task_rid(task), SensorKind::BusyTimeSec, -1.0);
        if (busy < 0.0) continue;  // not observed in the last window yet
        double share = busy / ctx.period_s();
        CoreId current =
            static_cast<CoreId>(ctx.actuation_val(task_rid(task), ActuatorKind::TaskCoreMap));
        TypeId current_type = sys.type_id_of_core(current);

        if (current_type != big && share >= up_threshold_) {
            CoreId dest = least_loaded_core(ctx, big);
            if (dest >= 0)
                ctx.actuate(task_rid(task), ActuatorKind::TaskCoreMap, static_cast<double>(dest));
        } else if (current_type != little && share <= down_threshold_) {
            CoreId dest = least_loaded_core(ctx, little);
            if (dest >= 0)
                ctx.actuate(task_rid(task), ActuatorKind::TaskCoreMap, static_cast<double>(dest));
        }
    }
}

MinPowerPolicy::MinPowerPolicy(std::string name, double period_s)
    : Policy(std::move(name), period_s) {}

std::vector<ActuatorKind> MinPowerPolicy::modeled_actuators() const {
    return {ActuatorKind::Frequency};
}

void MinPowerPolicy::execute(PolicyContext& ctx) {
    for (int d = 0; d < ctx.sys_info().num_domains(); ++d) {
        const std::vector<double> freqs =
            ctx.actuation_range(domain_rid(d), ActuatorKind::Frequency);
        ctx.actuate(domain_rid(d), ActuatorKind::Frequency, freqs.front());
    }
}

MaxPerfPolicy::MaxPerfPolicy(std::string name, double period_s)
    : Policy(std::move(name), period_s) {}

std::vector<ActuatorKind> MaxPerfPolicy::modeled_actuators() const {
    return {ActuatorKind::Frequency};
}

void MaxPerfPolicy::execute(PolicyContext& ctx) {
    for (int d = 0; d < ctx.sys_info().num_domains(); ++d) {
        const std::vector<double> freqs =
            ctx.actuation_range(domain_rid(d), ActuatorKind::Frequency);
        ctx.actuate(domain_rid(d), ActuatorKind::Frequency, freqs.back());
    }
}

const std::vector<PolicyTypeInfo>& policy_catalog() {
    static const std::vector<PolicyTypeInfo> catalog = {
        {"simple_dvfs", "reflective DVFS: picks the most efficient frequency per domain "
                        "(predicted IPS/W over the next window)"},
        {"ondemand", "load-threshold DVFS governor; also usable as a registered model "
                     "(param: up_threshold, default 0.8)"},
        {"reflective_mapping", "greedy task-to-core mapping driven by what-if system efficiency "
                               "(param: hysteresis, default 0.01)"},
        {"gts", "threshold migration between the fastest and slowest core types "
                "(params: up_threshold 0.9, down_threshold 0.3)"},
        {"min_power", "pins every domain to its lowest frequency"},
        {"max_perf", "pins every domain to its highest frequency"},
    };
    return catalog;
}

std::shared_ptr<Policy> make_policy(const std::string& type, const std::string& name,
                                    double period_s,
                                    const std::map<std::string, double>& params) {
    if (type == "simple_dvfs") return std::make_shared<SimpleDvfsPolicy>(name, period_s);
    if (type == "ondemand")
        return std::make_shared<OndemandGovernor>(name, period_s,
                                                  param_or(params, "up_threshold", 0.8));
    if (type == "reflective_mapping")
        return std::make_shared<ReflectiveMappingPolicy>(name, period_s,
                                                         param_or(params, "hysteresis", 0.01));
    if (type == "gts")
        return std::make_shared<GtsBaselinePolicy>(name, period_s,
                                                   param_or(params, "up_threshold", 0.9),
                                                   param_or(params, "down_threshold", 0.3));
    if (type == "min_power") return std::make_shared<MinPowerPolicy>(name, period_s);
    if (type == "max_perf") return std::make_shared<MaxPerfPolicy>(name, period_s);
    throw ValidationError("unknown policy type: " + type);
}

}  // namespace mars
