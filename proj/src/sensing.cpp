#include "mars/sensing.hpp"

#include <cmath>

#include "mars/errors.hpp"

namespace mars {

namespace {
constexpr double kTimeTolerance = 1e-9;
}

void SenseData::reset(int num_cores) {
    cores_.assign(static_cast<size_t>(num_cores), CoreAgg{});
    tasks_.clear();
    length_s_ = 0.0;
}

void SenseData::add(const SenseSample& sample) {
    if (cores_.size() < sample.cores.size()) cores_.resize(sample.cores.size());
    double dt = sample.duration_s();
    for (size_t c = 0; c < sample.cores.size(); ++c) {
        const CoreSampleRecord& rec = sample.cores[c];
        CoreAgg& agg = cores_[c];
        agg.instructions += rec.instructions;
        agg.busy_s += rec.busy_s;
        agg.energy_j += rec.power_w * dt;
        agg.task_seconds += static_cast<double>(rec.task_residency_s.size()) * dt;
    }
    for (const auto& [task, rec] : sample.tasks) {
        TaskAgg& agg = tasks_[task];
        agg.instructions += rec.instructions;
    }
    for (size_t c = 0; c < sample.cores.size(); ++c)
        for (const auto& [task, residency] : sample.cores[c].task_residency_s)
            tasks_[task].busy_s += residency;
    length_s_ += dt;
}

double SenseData::get(const SysInfo& sys, ResourceId resource, SensorKind kind) const {
    auto core_value = [&](CoreId c, SensorKind k) -> double {
        if (c < 0 || c >= static_cast<CoreId>(cores_.size()))
            throw UnknownResource("sense: unknown core " + std::to_string(c));
        const CoreAgg& agg = cores_[c];
        switch (k) {
            case SensorKind::InstructionsRetired: return static_cast<double>(agg.instructions);
            case SensorKind::BusyTimeSec: return agg.busy_s;
            case SensorKind::EnergyJoules: return agg.energy_j;
            case SensorKind::PowerWatts: return length_s_ > 0.0 ? agg.energy_j / length_s_ : 0.0;
            case SensorKind::IPS:
                return length_s_ > 0.0 ? static_cast<double>(agg.instructions) / length_s_ : 0.0;
            case SensorKind::NumTasks:
                return length_s_ > 0.0 ? agg.task_seconds / length_s_ : 0.0;
        }
        throw UnsupportedKind("sense: unsupported sensor kind");
    };

    switch (resource.kind) {
        case ResourceKind::Core:
            return core_value(resource.index, kind);
        case ResourceKind::FreqDomain: {
            const std::vector<CoreId>& members = sys.cores_in_domain(resource.index);
            double total = 0.0;
            for (CoreId c : members) total += core_value(c, kind);
            return total;
        }
        case ResourceKind::Task: {
            auto it = tasks_.find(resource.index);
            if (it == tasks_.end())
                throw UnknownResource("sense: unknown task " + std::to_string(resource.index));
            switch (kind) {
                case SensorKind::InstructionsRetired:
                    return static_cast<double>(it->second.instructions);
                case SensorKind::BusyTimeSec:
                    return it->second.busy_s;
                case SensorKind::IPS:
                    return length_s_ > 0.0 ? static_cast<double>(it->second.instructions) / length_s_
                                           : 0.0;
                default:
                    throw UnsupportedKind("sense: " + to_string(kind) +
                                          " is not available on a task resource");
            }
        }
    }
    throw UnknownResource("sense: bad resource kind");
}

WindowManager::WindowManager(const SysInfo& sys, double tick_s) : sys_(&sys), tick_s_(tick_s) {
    if (tick_s <= 0.0)
        throw InvalidPeriod("tick must be > 0");
}

int WindowManager::register_window(double period_s, std::string owner) {
    if (period_s <= 0.0)
        throw InvalidPeriod("window period must be > 0 (" + owner + ")");
    double ratio = period_s / tick_s_;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * rounded)
        throw InvalidPeriod("window period must be a positive integer multiple of the tick (" +
                            owner + ")");
    Window w;
    w.owner = std::move(owner);
    w.period_ticks = static_cast<std::uint64_t>(rounded);
    w.accumulator.reset(sys_->num_cores());
    w.history.reset(sys_->num_cores());
    windows_.push_back(std::move(w));
    return static_cast<int>(windows_.size()) - 1;
}

std::vector<int> WindowManager::ingest(const SenseSample& sample) {
    if (std::abs(sample.t_start_s - last_end_s_) > kTimeTolerance)
        throw NonContiguousSample("sample starts at " + std::to_string(sample.t_start_s) +
                                  ", expected " + std::to_string(last_end_s_));
    if (std::abs(sample.duration_s() - tick_s_) > kTimeTolerance)
        throw NonContiguousSample("sample length must equal one tick");
    if (static_cast<int>(sample.cores.size()) != sys_->num_cores())
        throw ValidationError("sample core records do not match the platform core count");
    for (size_t c = 0; c < sample.cores.size(); ++c) {
        const CoreSampleRecord& rec = sample.cores[c];
        if (rec.busy_s > sample.duration_s() + kTimeTolerance)
            throw ValidationError("sample busy_time exceeds the sample interval (core " +
                                  std::to_string(c) + ")");
        double residency = 0.0;
        for (const auto& [task, r] : rec.task_residency_s) residency += r;
        if (std::abs(residency - rec.busy_s) > kTimeTolerance)
            throw ValidationError("task residencies do not sum to busy_time (core " +
                                  std::to_string(c) + ")");
    }

    last_end_s_ = sample.t_end_s;
    ++elapsed_ticks_;

    std::vector<int> closed;
    for (size_t i = 0; i < windows_.size(); ++i) {
        Window& w = windows_[i];
        w.accumulator.add(sample);
        if (elapsed_ticks_ % w.period_ticks == 0) {
            w.history = std::move(w.accumulator);
            w.accumulator.reset(sys_->num_cores());
            ++w.completed;
            closed.push_back(static_cast<int>(i));
        }
    }
    return closed;
}

double WindowManager::sense(int window_id, ResourceId resource, SensorKind kind) const {
    const Window& w = window_at(window_id);
    if (w.completed == 0)
        throw NoCompletedWindow("window " + std::to_string(window_id) +
                                " has no completed window yet");
    return w.history.get(*sys_, resource, kind);
}

const SenseData& WindowManager::last_window(int window_id) const {
    const Window& w = window_at(window_id);
    if (w.completed == 0)
        throw NoCompletedWindow("window " + std::to_string(window_id) +
                                " has no completed window yet");
    return w.history;
}

bool WindowManager::has_completed_window(int window_id) const {
    return window_at(window_id).completed > 0;
}

double WindowManager::period_s(int window_id) const {
    return static_cast<double>(window_at(window_id).period_ticks) * tick_s_;
}

std::uint64_t WindowManager::period_ticks(int window_id) const {
    return window_at(window_id).period_ticks;
}

const std::string& WindowManager::owner(int window_id) const {
    return window_at(window_id).owner;
}

const WindowManager::Window& WindowManager::window_at(int id) const {
    if (id < 0 || id >= static_cast<int>(windows_.size()))
        throw UnknownResource("unknown window id " + std::to_string(id));
    return windows_[static_cast<size_t>(id)];
}

}  // namespace mars
