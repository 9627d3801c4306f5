#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mars/platform.hpp"

namespace mars {

// One tick's worth of sensed data, produced by the platform backend.
struct CoreSampleRecord {
    std::uint64_t instructions = 0;
    double busy_s = 0.0;
    double power_w = 0.0;
    std::map<TaskId, double> task_residency_s;
};

struct TaskSampleRecord {
    std::uint64_t instructions = 0;
};

struct SenseSample {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    std::vector<CoreSampleRecord> cores;   // indexed by core id
    std::map<TaskId, TaskSampleRecord> tasks;

    double duration_s() const { return t_end_s - t_start_s; }
};

// Aggregation of samples over one window. Counters sum exactly (integer
// accumulators); PowerWatts is the time-weighted mean (energy / length);
// IPS and NumTasks are derived at read time.
class SenseData {
  public:
    struct CoreAgg {
        std::uint64_t instructions = 0;
        double busy_s = 0.0;
        double energy_j = 0.0;
        double task_seconds = 0.0;
    };
    struct TaskAgg {
        std::uint64_t instructions = 0;
        double busy_s = 0.0;
    };

    void add(const SenseSample& sample);
    void reset(int num_cores);

    double length_s() const { return length_s_; }
    const std::vector<CoreAgg>& cores() const { return cores_; }
    const std::map<TaskId, TaskAgg>& tasks() const { return tasks_; }

    // Reads one metric. Domain values aggregate over member cores
    // (PowerWatts as the sum of member-core averages). Tasks support
    // InstructionsRetired, IPS and BusyTimeSec only.
    double get(const SysInfo& sys, ResourceId resource, SensorKind kind) const;

  private:
    std::vector<CoreAgg> cores_;
    std::map<TaskId, TaskAgg> tasks_;
    double length_s_ = 0.0;
};

// Per-policy sensing windows over a single sample stream. All windows open
// at t = 0 and close at integer multiples of their period, so windows of
// different lengths nest exactly. Samples must arrive in order,
// back-to-back, one tick long each.
class WindowManager {
  public:
    WindowManager(const SysInfo& sys, double tick_s);

    // Registers a window of the given period (a positive integer multiple
    // of the tick; InvalidPeriod otherwise). Returns the window id.
    int register_window(double period_s, std::string owner);

    // Feeds the next sample to every window. Returns the ids of windows
    // whose boundary coincides with sample.t_end_s, in registration order.
    // Throws NonContiguousSample on a gap or overlap.
    std::vector<int> ingest(const SenseSample& sample);

    // Value of `kind` for `resource` over the most recently completed
    // window of `window_id`. Throws NoCompletedWindow before the first
    // close; UnknownResource / UnsupportedKind per SenseData::get.
    double sense(int window_id, ResourceId resource, SensorKind kind) const;

    // Completed-window data, for model seeding.
    const SenseData& last_window(int window_id) const;
    bool has_completed_window(int window_id) const;

    double period_s(int window_id) const;
    std::uint64_t period_ticks(int window_id) const;
    const std::string& owner(int window_id) const;
    double tick_s() const { return tick_s_; }
    std::uint64_t elapsed_ticks() const { return elapsed_ticks_; }
    int num_windows() const { return static_cast<int>(windows_.size()); }

  private:
    struct Window {
        std::string owner;
        std::uint64_t period_ticks = 0;
        SenseData accumulator;
        SenseData history;
        std::uint64_t completed = 0;
    };

    const Window& window_at(int id) const;

    const SysInfo* sys_;
    double tick_s_;
    std::uint64_t elapsed_ticks_ = 0;
    double last_end_s_ = 0.0;
    std::vector<Window> windows_;
};

}  // namespace mars
