#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mars/platform.hpp"

namespace mars {

// One sampling interval of a recorded task: instructions retired and
// last-level-cache misses. Captured with the task running alone on the
// reference core type at ref_freq_ghz, fully busy.
struct TraceSample {
    std::uint64_t instructions = 0;
    std::uint64_t llc_misses = 0;

    bool operator==(const TraceSample&) const = default;
};

struct TraceHeader {
    double ref_freq_ghz = 0.0;
    double sample_ms = 0.0;
    std::string ref_core_type;

    bool operator==(const TraceHeader&) const = default;
};

struct TraceTask {
    TaskId id = 0;
    double arrival_ms = 0.0;
    std::vector<TraceSample> samples;

    bool operator==(const TraceTask&) const = default;
};

// A full workload: header plus per-task sample lists, sorted by task id.
struct TaskTraceSet {
    TraceHeader header;
    std::vector<TraceTask> tasks;

    bool operator==(const TaskTraceSet&) const = default;
};

// Trace file format:
//   #mars-trace v1 ref_freq_ghz=<f> sample_ms=<T> ref_core_type=<name>
//   <task_id>,<arrival_ms>,<sample_index>,<instructions>,<llc_misses>
// Rows sorted by (task_id, sample_index), sample_index contiguous from 0.
TaskTraceSet parse_trace(const std::string& text);
TaskTraceSet load_trace_file(const std::string& path);
std::string serialize_trace(const TaskTraceSet& trace);

// Structural checks beyond what parse_trace enforces. Returns one message
// per violation; empty means clean. Pass a platform to include
// cross-checks (ref core type known, ref frequency available on a domain
// of the reference type).
std::vector<std::string> validate_trace(const TaskTraceSet& trace, const SysInfo* sys);

// Workload descriptors of one sample, normalized to the reference core.
struct Descriptors {
    double cpi_base_ref = 0.0;  // compute cycles per instruction, reference core
    double mpi = 0.0;           // LLC misses per instruction

    bool operator==(const Descriptors&) const = default;
};

inline constexpr double kMinCpiBase = 0.1;

// Splits a sample's observed CPI into a compute part and a memory part:
//   mpi       = misses / instructions
//   cpi_total = ref_freq_hz * sample_s / instructions
//   cpi_mem   = mpi * mem_latency_s * ref_freq_hz
//   cpi_base  = max(cpi_total - cpi_mem, kMinCpiBase)
// Throws DegenerateSample when the sample has no instructions.
Descriptors derive_descriptors(const TraceSample& sample, const TraceHeader& header,
                               double mem_latency_s);

}  // namespace mars
