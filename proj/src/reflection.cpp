#include "mars/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mars/errors.hpp"
#include "mars/hw_model.hpp"

namespace mars {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScratchTask {
    TaskId id = 0;
    Descriptors desc;
    double demand_fraction = 1.0;  // of each sub-epoch
};

// Context handed to policy models inside a reflective query. Senses from
// the model's scratch window, stages into the scratch actuation state, and
// refuses committed actuation and nested reflection.
class ModelContext final : public PolicyContext {
  public:
    ModelContext(const ReflectionQuery& q, ActuationState& scratch, const SenseData& window,
                 double period_s, double now_s)
        : q_(q), scratch_(scratch), window_(window), period_s_(period_s), now_s_(now_s) {}

    const SysInfo& sys_info() const override { return *q_.sys; }
    double period_s() const override { return period_s_; }
    double now_s() const override { return now_s_; }
    bool is_model() const override { return true; }

    std::vector<TaskId> live_tasks() const override {
        std::vector<TaskId> out;
        out.reserve(scratch_.task_map.size());
        for (const auto& [task, core] : scratch_.task_map) out.push_back(task);
        return out;
    }

    double sense(ResourceId resource, SensorKind kind) const override {
        return window_.get(*q_.sys, resource, kind);
    }

    void actuate(ResourceId, ActuatorKind, double) override {
        throw ModelMayNotActuate("a registered model may not actuate; use try_actuate");
    }

    double actuation_val(ResourceId resource, ActuatorKind kind) const override {
        return scratch_value(resource, kind);
    }

    std::vector<double> actuation_range(ResourceId resource, ActuatorKind kind) const override {
        if (kind == ActuatorKind::Frequency) {
            if (resource.kind != ResourceKind::FreqDomain)
                throw UnsupportedKind("Frequency is actuated on frequency domains");
            return q_.sys->freq_range_of_domain(resource.index);
        }
        if (resource.kind != ResourceKind::Task)
            throw UnsupportedKind("TaskCoreMap is actuated on tasks");
        if (scratch_.task_map.find(resource.index) == scratch_.task_map.end())
            throw UnknownResource("unknown task " + std::to_string(resource.index));
        std::vector<double> cores;
        for (int c = 0; c < q_.sys->num_cores(); ++c) cores.push_back(static_cast<double>(c));
        return cores;
    }

    void try_actuate(ResourceId resource, ActuatorKind kind, double value) override {
        if (kind == ActuatorKind::Frequency) {
            if (resource.kind != ResourceKind::FreqDomain)
                throw UnsupportedKind("Frequency is actuated on frequency domains");
            q_.committed->check_frequency(resource.index, value);
            scratch_.domain_freq_ghz[resource.index] = value;
            return;
        }
        if (resource.kind != ResourceKind::Task)
            throw UnsupportedKind("TaskCoreMap is actuated on tasks");
        CoreId core = static_cast<CoreId>(std::llround(value));
        if (static_cast<double>(core) != value)
            throw OutOfRange("task mapping value must be a whole core id");
        if (core < 0 || core >= q_.sys->num_cores())
            throw OutOfRange("core " + std::to_string(core) + " does not exist");
        auto it = scratch_.task_map.find(resource.index);
        if (it == scratch_.task_map.end())
            throw UnknownResource("unknown task " + std::to_string(resource.index));
        it->second = core;
    }

    double try_actuation_val(ResourceId resource, ActuatorKind kind) const override {
        return scratch_value(resource, kind);
    }

    void clear_staged() override {}

    double sense_if(ResourceId, SensorKind, double) const override {
        throw Error("reflective queries are not available inside model execution");
    }
    using PolicyContext::sense_if;

    TaskPrediction predict_task_performance(TaskId) const override {
        throw Error("reflective queries are not available inside model execution");
    }

  private:
    double scratch_value(ResourceId resource, ActuatorKind kind) const {
        if (kind == ActuatorKind::Frequency) {
            if (resource.kind != ResourceKind::FreqDomain ||
                resource.index < 0 || resource.index >= q_.sys->num_domains())
                throw UnknownResource("unknown frequency domain");
            return scratch_.domain_freq_ghz[resource.index];
        }
        if (resource.kind != ResourceKind::Task)
            throw UnsupportedKind("TaskCoreMap is actuated on tasks");
        auto it = scratch_.task_map.find(resource.index);
        if (it == scratch_.task_map.end())
            throw UnknownResource("unknown task " + std::to_string(resource.index));
        return static_cast<double>(it->second);
    }

    const ReflectionQuery& q_;
    ActuationState& scratch_;
    const SenseData& window_;
    double period_s_;
    double now_s_;
};

}  // namespace

ModelRegistry::ModelRegistry(double tick_s) : tick_s_(tick_s) {
    if (tick_s <= 0.0) throw InvalidPeriod("tick must be > 0");
}

void ModelRegistry::register_model(std::shared_ptr<Policy> model, double period_s) {
    if (period_s <= 0.0)
        throw InvalidPeriod("model period must be > 0 (" + model->name() + ")");
    double ratio = period_s / tick_s_;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded)
        throw InvalidPeriod("model period must be a positive integer multiple of the tick (" +
                            model->name() + ")");
    std::uint64_t ticks = static_cast<std::uint64_t>(rounded);

    for (const Entry& e : entries_) {
        std::uint64_t lo = std::min(e.period_ticks, ticks);
        std::uint64_t hi = std::max(e.period_ticks, ticks);
        if (hi % lo != 0)
            throw InvalidPeriod("model periods must nest: " + model->name() + " vs " +
                                e.model->name());
        for (ActuatorKind mine : model->modeled_actuators())
            for (ActuatorKind theirs : e.model->modeled_actuators())
                if (mine == theirs)
                    throw DuplicateModel("actuator " + to_string(mine) + " already modeled by " +
                                         e.model->name());
    }

    entries_.push_back(Entry{std::move(model), ticks});
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const Entry& a, const Entry& b) { return a.period_ticks < b.period_ticks; });
}

std::uint64_t ReflectionEngine::check_query(const ReflectionQuery& q, double horizon_s) const {
    if (q.forecast == nullptr)
        throw NoForecast("senseIf requires at least one completed sensing window");
    double ratio = horizon_s / q.tick_s;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded)
        throw InvalidPeriod("senseIf horizon must be a positive multiple of the tick");
    std::uint64_t horizon_ticks = static_cast<std::uint64_t>(rounded);
    if (horizon_ticks != q.policy_period_ticks)
        throw InvalidPeriod("senseIf horizon must equal the querying policy's period");
    const auto& entries = registry_->entries();
    if (q.model_seeds.size() != entries.size())
        throw Error("reflection query is missing model window seeds");
    for (size_t i = 0; i < entries.size(); ++i) {
        if (horizon_ticks % entries[i].period_ticks != 0)
            throw InvalidPeriod("model period of " + entries[i].model->name() +
                                " does not divide the querying policy's period");
        if (q.model_seeds[i] == nullptr)
            throw NoForecast("model " + entries[i].model->name() +
                             " has no completed sensing window");
    }
    return horizon_ticks;
}

ReflectionEngine::Prediction ReflectionEngine::simulate(const ReflectionQuery& q,
                                                        const PredictionContext& staged,
                                                        std::uint64_t horizon_ticks) const {
    const SysInfo& sys = *q.sys;
    ActuationState scratch = apply_overlay(q.committed->state(), staged);

    // Saturated tasks demand the whole sub-epoch; demand_ips_ref below the
    // reference-run rate scales the demand down proportionally.
    std::vector<ScratchTask> tasks;
    tasks.reserve(q.forecast->size());
    const CoreType& ref_type = sys.core_type(sys.reference_type());
    for (const auto& [task, fc] : *q.forecast) {
        if (scratch.task_map.find(task) == scratch.task_map.end()) continue;
        double spi_ref = seconds_per_instruction(fc.desc, ref_type.cpi_scale, q.ref_freq_ghz,
                                                 sys.mem_latency_s());
        double fraction = fc.demand_ips_ref * spi_ref;
        if (fraction >= 1.0 - 1e-12) fraction = 1.0;
        tasks.push_back(ScratchTask{task, fc.desc, fraction});
    }

    const auto& entries = registry_->entries();
    struct ModelWindow {
        SenseData accumulator;
        SenseData history;
    };
    std::vector<ModelWindow> model_windows(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        model_windows[i].accumulator.reset(sys.num_cores());
        model_windows[i].history = *q.model_seeds[i];
    }

    Prediction out;
    out.horizon.reset(sys.num_cores());
    out.initial_state = scratch;
    last_query_executions_ = 0;

    for (std::uint64_t k = 0; k < horizon_ticks; ++k) {
        double t = q.base_time_s + static_cast<double>(k) * q.tick_s;

        for (size_t i = 0; i < entries.size(); ++i) {
            if (k % entries[i].period_ticks != 0) continue;
            double period = static_cast<double>(entries[i].period_ticks) * q.tick_s;
            ModelContext ctx(q, scratch, model_windows[i].history, period, t);
            entries[i].model->execute(ctx);
            ++last_query_executions_;
        }

        // Baseline performance/power model for this sub-epoch.
        SenseSample sample;
        sample.t_start_s = t;
        sample.t_end_s = t + q.tick_s;
        sample.cores.resize(static_cast<size_t>(sys.num_cores()));
        for (int c = 0; c < sys.num_cores(); ++c) {
            std::vector<TaskWork> work;
            for (const ScratchTask& st : tasks) {
                if (scratch.task_map.at(st.id) != c) continue;
                work.push_back(TaskWork{st.id, st.desc, kInf, st.demand_fraction * q.tick_s, 0.0});
            }
            const CoreType& type = sys.type_of_core(c);
            double freq = scratch.domain_freq_ghz[sys.domain_of_core(c)];
            CoreEval eval = evaluate_core(type, freq, sys.mem_latency_s(), q.tick_s, work);
            CoreSampleRecord& rec = sample.cores[static_cast<size_t>(c)];
            rec.busy_s = eval.busy_s;
            rec.power_w = eval.power_w;
            for (const TaskRun& run : eval.tasks) {
                rec.instructions += run.instructions;
                rec.task_residency_s[run.id] = run.runtime_s;
                sample.tasks[run.id].instructions += run.instructions;
            }
        }
        ++last_query_executions_;

        out.horizon.add(sample);
        for (size_t i = 0; i < entries.size(); ++i) {
            model_windows[i].accumulator.add(sample);
            if ((k + 1) % entries[i].period_ticks == 0) {
                model_windows[i].history = std::move(model_windows[i].accumulator);
                model_windows[i].accumulator.reset(sys.num_cores());
            }
        }
    }
    return out;
}

double ReflectionEngine::sense_if(const ReflectionQuery& q, const PredictionContext& staged,
                                  ResourceId resource, SensorKind kind, double horizon_s) const {
    std::uint64_t horizon_ticks = check_query(q, horizon_s);
    Prediction p = simulate(q, staged, horizon_ticks);
    return p.horizon.get(*q.sys, resource, kind);
}

TaskPrediction ReflectionEngine::predict_task_performance(const ReflectionQuery& q,
                                                          const PredictionContext& staged,
                                                          TaskId task) const {
    std::uint64_t horizon_ticks = check_query(
        q, static_cast<double>(q.policy_period_ticks) * q.tick_s);
    if (q.forecast->find(task) == q.forecast->end())
        throw UnknownResource("unknown task " + std::to_string(task));
    Prediction p = simulate(q, staged, horizon_ticks);

    TaskPrediction out;
    out.ips = p.horizon.get(*q.sys, task_rid(task), SensorKind::IPS);
    auto host = p.initial_state.task_map.find(task);
    if (host == p.initial_state.task_map.end())
        throw UnknownResource("task " + std::to_string(task) + " is not mapped");
    double horizon_len = p.horizon.length_s();
    double residency_fraction =
        horizon_len > 0.0
            ? p.horizon.get(*q.sys, task_rid(task), SensorKind::BusyTimeSec) / horizon_len
            : 0.0;
    double host_power = p.horizon.get(*q.sys, core_rid(host->second), SensorKind::PowerWatts);
    out.power_share_w = residency_fraction * host_power;
    return out;
}

}  // namespace mars
