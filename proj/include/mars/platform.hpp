#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mars {

using CoreId = int;
using DomainId = int;
using TaskId = int;
using TypeId = int;

// Static description of one core microarchitecture. cpi_scale is the
// base-CPI multiplier relative to the trace reference type (reference has
// cpi_scale == 1). Power model coefficients: active power at frequency f
// (GHz) is dyn_coeff_w_per_ghz3 * f^3 + static_active_w; an idle core burns
// idle_w.
struct CoreType {
    std::string name;
    double cpi_scale = 1.0;
    double dyn_coeff_w_per_ghz3 = 0.0;
    double static_active_w = 0.0;
    double idle_w = 0.0;
    bool reference = false;

    bool operator==(const CoreType&) const = default;
};

// A set of cores sharing one frequency setting (cluster-level DVFS). All
// member cores have the same core type. available_freqs_ghz is strictly
// ascending.
struct FrequencyDomain {
    DomainId id = 0;
    TypeId core_type = 0;
    std::vector<CoreId> cores;
    std::vector<double> available_freqs_ghz;

    bool operator==(const FrequencyDomain&) const = default;
};

struct CoreInfo {
    CoreId id = 0;
    TypeId type = 0;
    DomainId domain = 0;

    bool operator==(const CoreInfo&) const = default;
};

// Immutable platform topology. Built by load_platform(); safe to share
// read-only across threads.
class SysInfo {
  public:
    SysInfo() = default;
    SysInfo(std::vector<CoreType> types, std::vector<FrequencyDomain> domains,
            double mem_latency_s);

    const std::vector<CoreType>& core_types() const { return core_types_; }
    const std::vector<CoreInfo>& cores() const { return cores_; }
    const std::vector<FrequencyDomain>& domains() const { return domains_; }
    double mem_latency_s() const { return mem_latency_s_; }

    int num_cores() const { return static_cast<int>(cores_.size()); }
    int num_domains() const { return static_cast<int>(domains_.size()); }

    // Topology queries. All throw UnknownResource for out-of-range ids.
    const std::vector<CoreId>& cores_in_domain(DomainId d) const;
    DomainId domain_of_core(CoreId c) const;
    const CoreType& type_of_core(CoreId c) const;
    TypeId type_id_of_core(CoreId c) const;
    const std::vector<double>& freq_range_of_domain(DomainId d) const;

    const CoreType& core_type(TypeId t) const;
    TypeId reference_type() const { return reference_type_; }
    std::vector<CoreId> cores_of_type(TypeId t) const;
    std::optional<TypeId> find_core_type(std::string_view name) const;

    bool operator==(const SysInfo& other) const;

  private:
    std::vector<CoreType> core_types_;
    std::vector<CoreInfo> cores_;
    std::vector<FrequencyDomain> domains_;
    double mem_latency_s_ = 0.0;
    TypeId reference_type_ = 0;
};

// Parses and validates a platform description document (JSON). Document
// schema: top-level keys `core_types` (array of {name, cpi_scale,
// dyn_coeff_w_per_ghz3, static_active_w, idle_w, reference}), `domains`
// (array of {core_type, core_count, freqs_ghz}) and `mem_latency_ns`.
// Core ids are assigned contiguously in domain declaration order.
//
// Throws ParseError on malformed documents and ValidationError (naming the
// offending field) on invariant violations.
SysInfo load_platform(const std::string& text);
SysInfo load_platform_file(const std::string& path);

// Emits a document that load_platform() round-trips to an equal SysInfo.
std::string serialize_platform(const SysInfo& sys);

enum class ResourceKind { Core, FreqDomain, Task };

// Address of a sensable/actuatable resource.
struct ResourceId {
    ResourceKind kind = ResourceKind::Core;
    int index = 0;

    auto operator<=>(const ResourceId&) const = default;
};

inline ResourceId core_rid(CoreId c) { return {ResourceKind::Core, c}; }
inline ResourceId domain_rid(DomainId d) { return {ResourceKind::FreqDomain, d}; }
inline ResourceId task_rid(TaskId t) { return {ResourceKind::Task, t}; }

std::string to_string(const ResourceId& r);

enum class SensorKind {
    InstructionsRetired,  // count, sums across samples
    BusyTimeSec,          // seconds, sums
    PowerWatts,           // watts, time-weighted mean
    IPS,                  // instructions/second, derived from the window
    EnergyJoules,         // joules, sums
    NumTasks,             // count, time-weighted mean
};

enum class ActuatorKind {
    Frequency,    // GHz, per FreqDomain; value must match an available step
    TaskCoreMap,  // core id, per Task
};

std::string to_string(SensorKind k);
std::string to_string(ActuatorKind k);

}  // namespace mars
