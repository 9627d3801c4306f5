#include "mars/actuation.hpp"

#include <algorithm>
#include <cmath>

#include "mars/errors.hpp"

namespace mars {

Actuator::Actuator(const SysInfo& sys) : sys_(&sys) {
    state_.domain_freq_ghz.reserve(sys.num_domains());
    for (const FrequencyDomain& d : sys.domains())
        state_.domain_freq_ghz.push_back(d.available_freqs_ghz.front());
}

void Actuator::check_frequency(DomainId d, double ghz) const {
    if (d < 0 || d >= sys_->num_domains())
        throw UnknownResource("unknown frequency domain " + std::to_string(d));
    const std::vector<double>& freqs = sys_->freq_range_of_domain(d);
    if (std::find(freqs.begin(), freqs.end(), ghz) == freqs.end())
        throw OutOfRange("frequency " + std::to_string(ghz) +
                         " GHz is not an available step of domain " + std::to_string(d));
}

void Actuator::check_task_mapping(TaskId task, CoreId core) const {
    if (state_.task_map.find(task) == state_.task_map.end())
        throw UnknownResource("unknown task " + std::to_string(task));
    if (core < 0 || core >= sys_->num_cores())
        throw OutOfRange("core " + std::to_string(core) + " does not exist");
}

void Actuator::set_frequency(DomainId d, double ghz) {
    check_frequency(d, ghz);
    state_.domain_freq_ghz[d] = ghz;
}

double Actuator::frequency(DomainId d) const {
    if (d < 0 || d >= sys_->num_domains())
        throw UnknownResource("unknown frequency domain " + std::to_string(d));
    return state_.domain_freq_ghz[d];
}

bool Actuator::map_task(TaskId task, CoreId core, bool count_migration) {
    if (core < 0 || core >= sys_->num_cores())
        throw OutOfRange("core " + std::to_string(core) + " does not exist");
    auto it = state_.task_map.find(task);
    bool changed = it != state_.task_map.end() && it->second != core;
    state_.task_map[task] = core;
    if (changed && count_migration) ++migrations_;
    return changed;
}

CoreId Actuator::core_of(TaskId task) const {
    auto it = state_.task_map.find(task);
    if (it == state_.task_map.end())
        throw UnknownResource("unknown task " + std::to_string(task));
    return it->second;
}

bool Actuator::has_task(TaskId task) const {
    return state_.task_map.find(task) != state_.task_map.end();
}

void Actuator::remove_task(TaskId task) {
    state_.task_map.erase(task);
}

double Actuator::actuation_val(ResourceId resource, ActuatorKind kind) const {
    if (kind == ActuatorKind::Frequency) {
        if (resource.kind != ResourceKind::FreqDomain)
            throw UnsupportedKind("Frequency is actuated on frequency domains");
        return frequency(resource.index);
    }
    if (resource.kind != ResourceKind::Task)
        throw UnsupportedKind("TaskCoreMap is actuated on tasks");
    return static_cast<double>(core_of(resource.index));
}

std::vector<double> Actuator::actuation_range(ResourceId resource, ActuatorKind kind) const {
    if (kind == ActuatorKind::Frequency) {
        if (resource.kind != ResourceKind::FreqDomain)
            throw UnsupportedKind("Frequency is actuated on frequency domains");
        return sys_->freq_range_of_domain(resource.index);
    }
    if (resource.kind != ResourceKind::Task)
        throw UnsupportedKind("TaskCoreMap is actuated on tasks");
    if (!has_task(resource.index))
        throw UnknownResource("unknown task " + std::to_string(resource.index));
    std::vector<double> cores;
    cores.reserve(sys_->num_cores());
    for (int c = 0; c < sys_->num_cores(); ++c) cores.push_back(static_cast<double>(c));
    return cores;
}

namespace {

CoreId core_id_from_value(double value) {
    double rounded = std::round(value);
    if (value != rounded)
        throw OutOfRange("task mapping value must be a whole core id");
    return static_cast<CoreId>(rounded);
}

}  // namespace

void try_actuate(PredictionContext& ctx, const Actuator& committed, ResourceId resource,
                 ActuatorKind kind, double value) {
    if (kind == ActuatorKind::Frequency) {
        if (resource.kind != ResourceKind::FreqDomain)
            throw UnsupportedKind("Frequency is actuated on frequency domains");
        committed.check_frequency(resource.index, value);
        ctx.freq_ghz[resource.index] = value;
        return;
    }
    if (resource.kind != ResourceKind::Task)
        throw UnsupportedKind("TaskCoreMap is actuated on tasks");
    CoreId core = core_id_from_value(value);
    committed.check_task_mapping(resource.index, core);
    ctx.task_map[resource.index] = core;
}

double try_actuation_val(const PredictionContext& ctx, const Actuator& committed,
                         ResourceId resource, ActuatorKind kind) {
    if (kind == ActuatorKind::Frequency && resource.kind == ResourceKind::FreqDomain) {
        auto it = ctx.freq_ghz.find(resource.index);
        if (it != ctx.freq_ghz.end()) return it->second;
    }
    if (kind == ActuatorKind::TaskCoreMap && resource.kind == ResourceKind::Task) {
        auto it = ctx.task_map.find(resource.index);
        if (it != ctx.task_map.end()) return static_cast<double>(it->second);
    }
    return committed.actuation_val(resource, kind);
}

ActuationState apply_overlay(const ActuationState& base, const PredictionContext& ctx) {
    ActuationState out = base;
    for (const auto& [domain, ghz] : ctx.freq_ghz) out.domain_freq_ghz[domain] = ghz;
    for (const auto& [task, core] : ctx.task_map) out.task_map[task] = core;
    return out;
}

}  // namespace mars
