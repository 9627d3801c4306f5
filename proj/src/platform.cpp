#include "mars/platform.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mars/errors.hpp"

namespace mars {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ParseError(std::string("missing or non-numeric field: ") + key);
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw ParseError(std::string("missing or non-string field: ") + key);
    return obj[key].get<std::string>();
}

}  // namespace

SysInfo::SysInfo(std::vector<CoreType> types, std::vector<FrequencyDomain> domains,
                 double mem_latency_s)
    : core_types_(std::move(types)),
      domains_(std::move(domains)),
      mem_latency_s_(mem_latency_s) {
    if (mem_latency_s_ <= 0.0)
        throw ValidationError("mem_latency_ns: must be > 0");

    int reference_count = 0;
    for (size_t t = 0; t < core_types_.size(); ++t) {
        const CoreType& ct = core_types_[t];
        if (ct.name.empty())
            throw ValidationError("core_types.name: must be non-empty");
        if (ct.cpi_scale <= 0.0)
            throw ValidationError("cpi_scale: must be > 0 (core type " + ct.name + ")");
        if (ct.dyn_coeff_w_per_ghz3 < 0.0)
            throw ValidationError("dyn_coeff_w_per_ghz3: must be >= 0 (core type " + ct.name + ")");
        if (ct.static_active_w < 0.0)
            throw ValidationError("static_active_w: must be >= 0 (core type " + ct.name + ")");
        if (ct.idle_w < 0.0)
            throw ValidationError("idle_w: must be >= 0 (core type " + ct.name + ")");
        for (size_t u = 0; u < t; ++u)
            if (core_types_[u].name == ct.name)
                throw ValidationError("core_types.name: duplicate name " + ct.name);
        if (ct.reference) {
            reference_type_ = static_cast<TypeId>(t);
            ++reference_count;
            if (ct.cpi_scale != 1.0)
                throw ValidationError("cpi_scale: reference core type must have cpi_scale == 1 (core type " +
                                      ct.name + ")");
        }
    }
    if (reference_count == 0)
        throw ValidationError("reference: no reference core type");
    if (reference_count > 1)
        throw ValidationError("reference: more than one reference core type");
    for (size_t t = 0; t < core_types_.size(); ++t) {
        if (core_types_[t].cpi_scale == 1.0 && static_cast<TypeId>(t) != reference_type_)
            throw ValidationError("cpi_scale: only the reference core type may have cpi_scale == 1 (core type " +
                                  core_types_[t].name + ")");
    }

    int next_core = 0;
    for (size_t d = 0; d < domains_.size(); ++d) {
        FrequencyDomain& dom = domains_[d];
        if (dom.id != static_cast<DomainId>(d))
            throw ValidationError("domains.id: ids must be contiguous from 0");
        if (dom.core_type < 0 || dom.core_type >= static_cast<TypeId>(core_types_.size()))
            throw ValidationError("domains.core_type: unknown core type index");
        if (dom.cores.empty())
            throw ValidationError("core_count: domain must contain at least one core");
        if (dom.available_freqs_ghz.empty())
            throw ValidationError("available_freqs: must be non-empty (domain " + std::to_string(d) + ")");
        for (size_t i = 0; i < dom.available_freqs_ghz.size(); ++i) {
            if (dom.available_freqs_ghz[i] <= 0.0)
                throw ValidationError("available_freqs: frequencies must be > 0 (domain " +
                                      std::to_string(d) + ")");
            if (i > 0 && dom.available_freqs_ghz[i] <= dom.available_freqs_ghz[i - 1])
                throw ValidationError("available_freqs: must be strictly ascending (domain " +
                                      std::to_string(d) + ")");
        }
        for (CoreId c : dom.cores) {
            if (c != next_core)
                throw ValidationError("domains.cores: core ids must be contiguous in declaration order");
            cores_.push_back(CoreInfo{c, dom.core_type, static_cast<DomainId>(d)});
            ++next_core;
        }
    }
    if (cores_.empty())
        throw ValidationError("domains: platform has no cores");
}

const std::vector<CoreId>& SysInfo::cores_in_domain(DomainId d) const {
    if (d < 0 || d >= num_domains())
        throw UnknownResource("unknown frequency domain " + std::to_string(d));
    return domains_[d].cores;
}

DomainId SysInfo::domain_of_core(CoreId c) const {
    if (c < 0 || c >= num_cores())
        throw UnknownResource("unknown core " + std::to_string(c));
    return cores_[c].domain;
}

const CoreType& SysInfo::type_of_core(CoreId c) const {
    return core_types_[type_id_of_core(c)];
}

TypeId SysInfo::type_id_of_core(CoreId c) const {
    if (c < 0 || c >= num_cores())
        throw UnknownResource("unknown core " + std::to_string(c));
    return cores_[c].type;
}

const std::vector<double>& SysInfo::freq_range_of_domain(DomainId d) const {
    if (d < 0 || d >= num_domains())
        throw UnknownResource("unknown frequency domain " + std::to_string(d));
    return domains_[d].available_freqs_ghz;
}

const CoreType& SysInfo::core_type(TypeId t) const {
    if (t < 0 || t >= static_cast<TypeId>(core_types_.size()))
        throw UnknownResource("unknown core type " + std::to_string(t));
    return core_types_[t];
}

std::vector<CoreId> SysInfo::cores_of_type(TypeId t) const {
    std::vector<CoreId> out;
    for (const CoreInfo& c : cores_)
        if (c.type == t) out.push_back(c.id);
    return out;
}

std::optional<TypeId> SysInfo::find_core_type(std::string_view name) const {
    for (size_t t = 0; t < core_types_.size(); ++t)
        if (core_types_[t].name == name) return static_cast<TypeId>(t);
    return std::nullopt;
}

bool SysInfo::operator==(const SysInfo& other) const {
    return core_types_ == other.core_types_ && cores_ == other.cores_ &&
           domains_ == other.domains_ && mem_latency_s_ == other.mem_latency_s_;
}

SysInfo load_platform(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("platform document: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("platform document: top level must be an object");
    if (!doc.contains("core_types") || !doc["core_types"].is_array())
        throw ParseError("platform document: missing array field core_types");
    if (!doc.contains("domains") || !doc["domains"].is_array())
        throw ParseError("platform document: missing array field domains");

    std::vector<CoreType> types;
    for (const json& jt : doc["core_types"]) {
        CoreType ct;
        ct.name = require_string(jt, "name");
        ct.cpi_scale = require_number(jt, "cpi_scale");
        ct.dyn_coeff_w_per_ghz3 = require_number(jt, "dyn_coeff_w_per_ghz3");
        ct.static_active_w = require_number(jt, "static_active_w");
        ct.idle_w = require_number(jt, "idle_w");
        if (!jt.contains("reference") || !jt["reference"].is_boolean())
            throw ParseError("core_types: missing boolean field reference");
        ct.reference = jt["reference"].get<bool>();
        types.push_back(std::move(ct));
    }

    std::vector<FrequencyDomain> domains;
    CoreId next_core = 0;
    for (const json& jd : doc["domains"]) {
        FrequencyDomain dom;
        dom.id = static_cast<DomainId>(domains.size());
        std::string type_name = require_string(jd, "core_type");
        TypeId type_idx = -1;
        for (size_t t = 0; t < types.size(); ++t)
            if (types[t].name == type_name) type_idx = static_cast<TypeId>(t);
        if (type_idx < 0)
            throw ValidationError("domains.core_type: unknown core type name " + type_name);
        dom.core_type = type_idx;
        double count = require_number(jd, "core_count");
        if (count != static_cast<double>(static_cast<int>(count)) || count < 1)
            throw ValidationError("core_count: must be a positive integer");
        for (int i = 0; i < static_cast<int>(count); ++i) dom.cores.push_back(next_core++);
        if (!jd.contains("freqs_ghz") || !jd["freqs_ghz"].is_array())
            throw ParseError("domains: missing array field freqs_ghz");
        for (const json& jf : jd["freqs_ghz"]) {
            if (!jf.is_number())
                throw ParseError("freqs_ghz: entries must be numbers");
            dom.available_freqs_ghz.push_back(jf.get<double>());
        }
        domains.push_back(std::move(dom));
    }

    double mem_latency_ns = require_number(doc, "mem_latency_ns");
    return SysInfo(std::move(types), std::move(domains), mem_latency_ns * 1e-9);
}

SysInfo load_platform_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open platform file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_platform(ss.str());
}

std::string serialize_platform(const SysInfo& sys) {
    json doc;
    doc["core_types"] = json::array();
    for (const CoreType& ct : sys.core_types()) {
        doc["core_types"].push_back({{"name", ct.name},
                                     {"cpi_scale", ct.cpi_scale},
                                     {"dyn_coeff_w_per_ghz3", ct.dyn_coeff_w_per_ghz3},
                                     {"static_active_w", ct.static_active_w},
                                     {"idle_w", ct.idle_w},
                                     {"reference", ct.reference}});
    }
    doc["domains"] = json::array();
    for (const FrequencyDomain& dom : sys.domains()) {
        doc["domains"].push_back({{"core_type", sys.core_types()[dom.core_type].name},
                                  {"core_count", static_cast<int>(dom.cores.size())},
                                  {"freqs_ghz", dom.available_freqs_ghz}});
    }
    doc["mem_latency_ns"] = sys.mem_latency_s() * 1e9;
    return doc.dump(2) + "\n";
}

std::string to_string(const ResourceId& r) {
    switch (r.kind) {
        case ResourceKind::Core: return "core" + std::to_string(r.index);
        case ResourceKind::FreqDomain: return "domain" + std::to_string(r.index);
        case ResourceKind::Task: return "task" + std::to_string(r.index);
    }
    return "?";
}

std::string to_string(SensorKind k) {
    switch (k) {
        case SensorKind::InstructionsRetired: return "InstructionsRetired";
        case SensorKind::BusyTimeSec: return "BusyTimeSec";
        case SensorKind::PowerWatts: return "PowerWatts";
        case SensorKind::IPS: return "IPS";
        case SensorKind::EnergyJoules: return "EnergyJoules";
        case SensorKind::NumTasks: return "NumTasks";
    }
    return "?";
}

std::string to_string(ActuatorKind k) {
    switch (k) {
        case ActuatorKind::Frequency: return "Frequency";
        case ActuatorKind::TaskCoreMap: return "TaskCoreMap";
    }
    return "?";
}

}  // namespace mars
