#include "mars/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mars/errors.hpp"

namespace mars {

namespace {

constexpr const char* kMagic = "#mars-trace v1";

// Parses "key=value" pairs from the header line after the magic token.
std::string header_field(const std::string& line, const std::string& key) {
    std::string needle = key + "=";
    size_t pos = line.find(needle);
    if (pos == std::string::npos)
        throw ParseError("trace header: missing field " + key);
    size_t start = pos + needle.size();
    size_t end = line.find(' ', start);
    if (end == std::string::npos) end = line.size();
    return line.substr(start, end - start);
}

double parse_double_field(const std::string& token, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError("trace: bad numeric value for " + what + ": " + token);
    }
}

std::uint64_t parse_u64_field(std::string_view token, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError("trace: bad integer value for " + what + ": " + std::string(token));
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

TaskTraceSet parse_trace(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("trace: empty document");
    if (line.rfind(kMagic, 0) != 0)
        throw ParseError("trace: missing header line '#mars-trace v1 ...'");

    TaskTraceSet trace;
    trace.header.ref_freq_ghz = parse_double_field(header_field(line, "ref_freq_ghz"), "ref_freq_ghz");
    trace.header.sample_ms = parse_double_field(header_field(line, "sample_ms"), "sample_ms");
    trace.header.ref_core_type = header_field(line, "ref_core_type");
    if (trace.header.ref_freq_ghz <= 0.0)
        throw ValidationError("trace header: ref_freq_ghz must be > 0");
    if (trace.header.sample_ms <= 0.0)
        throw ValidationError("trace header: sample_ms must be > 0");

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 5)
            throw ParseError("trace line " + std::to_string(line_no) + ": expected 5 CSV fields");
        TaskId task_id = static_cast<TaskId>(parse_u64_field(fields[0], "task_id"));
        double arrival_ms = parse_double_field(std::string(fields[1]), "arrival_ms");
        std::uint64_t sample_index = parse_u64_field(fields[2], "sample_index");
        std::uint64_t instructions = parse_u64_field(fields[3], "instructions");
        std::uint64_t misses = parse_u64_field(fields[4], "llc_misses");

        if (trace.tasks.empty() || trace.tasks.back().id != task_id) {
            if (!trace.tasks.empty() && task_id <= trace.tasks.back().id)
                throw ValidationError("trace line " + std::to_string(line_no) +
                                      ": rows must be sorted by (task_id, sample_index)");
            trace.tasks.push_back(TraceTask{task_id, arrival_ms, {}});
        }
        TraceTask& task = trace.tasks.back();
        if (arrival_ms != task.arrival_ms)
            throw ValidationError("trace line " + std::to_string(line_no) +
                                  ": inconsistent arrival_ms for task " + std::to_string(task_id));
        if (sample_index != task.samples.size())
            throw ValidationError("trace line " + std::to_string(line_no) +
                                  ": non-monotone sample_index for task " + std::to_string(task_id));
        if (instructions == 0)
            throw ValidationError("trace line " + std::to_string(line_no) +
                                  ": instructions must be > 0");
        if (misses > instructions)
            throw ValidationError("trace line " + std::to_string(line_no) +
                                  ": llc_misses must be <= instructions");
        if (arrival_ms < 0.0)
            throw ValidationError("trace line " + std::to_string(line_no) +
                                  ": arrival_ms must be >= 0");
        task.samples.push_back(TraceSample{instructions, misses});
    }

    for (const TraceTask& t : trace.tasks)
        if (t.samples.empty())
            throw ValidationError("trace: task " + std::to_string(t.id) + " has no samples");
    return trace;
}

TaskTraceSet load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str());
}

std::string serialize_trace(const TaskTraceSet& trace) {
    std::ostringstream out;
    out.precision(17);
    out << kMagic << " ref_freq_ghz=" << trace.header.ref_freq_ghz
        << " sample_ms=" << trace.header.sample_ms
        << " ref_core_type=" << trace.header.ref_core_type << "\n";
    for (const TraceTask& task : trace.tasks) {
        for (size_t i = 0; i < task.samples.size(); ++i) {
            out << task.id << ',' << task.arrival_ms << ',' << i << ','
                << task.samples[i].instructions << ',' << task.samples[i].llc_misses << "\n";
        }
    }
    return out.str();
}

std::vector<std::string> validate_trace(const TaskTraceSet& trace, const SysInfo* sys) {
    std::vector<std::string> violations;
    if (trace.header.ref_freq_ghz <= 0.0)
        violations.push_back("trace header: ref_freq_ghz must be > 0");
    if (trace.header.sample_ms <= 0.0)
        violations.push_back("trace header: sample_ms must be > 0");
    if (trace.tasks.empty())
        violations.push_back("trace: no tasks");
    for (const TraceTask& t : trace.tasks) {
        if (t.samples.empty())
            violations.push_back("trace: task " + std::to_string(t.id) + " has no samples");
        for (size_t i = 0; i < t.samples.size(); ++i) {
            if (t.samples[i].instructions == 0)
                violations.push_back("trace: task " + std::to_string(t.id) + " sample " +
                                     std::to_string(i) + ": instructions must be > 0");
            if (t.samples[i].llc_misses > t.samples[i].instructions)
                violations.push_back("trace: task " + std::to_string(t.id) + " sample " +
                                     std::to_string(i) + ": llc_misses > instructions");
        }
    }
    if (sys != nullptr) {
        auto type = sys->find_core_type(trace.header.ref_core_type);
        if (!type) {
            violations.push_back("trace header: ref_core_type '" + trace.header.ref_core_type +
                                 "' not present in platform");
        } else {
            if (*type != sys->reference_type())
                violations.push_back("trace header: ref_core_type '" + trace.header.ref_core_type +
                                     "' is not the platform's reference core type");
            bool freq_found = false;
            for (const FrequencyDomain& dom : sys->domains()) {
                if (dom.core_type != *type) continue;
                for (double f : dom.available_freqs_ghz)
                    if (f == trace.header.ref_freq_ghz) freq_found = true;
            }
            if (!freq_found)
                violations.push_back("trace header: ref_freq_ghz not available on any domain of the "
                                     "reference core type");
        }
    }
    return violations;
}

Descriptors derive_descriptors(const TraceSample& sample, const TraceHeader& header,
                               double mem_latency_s) {
    if (sample.instructions == 0)
        throw DegenerateSample("trace sample with zero instructions");
    double n = static_cast<double>(sample.instructions);
    double ref_freq_hz = header.ref_freq_ghz * 1e9;
    double sample_s = header.sample_ms * 1e-3;

    Descriptors d;
    d.mpi = static_cast<double>(sample.llc_misses) / n;
    double cpi_total = ref_freq_hz * sample_s / n;
    double cpi_mem = d.mpi * mem_latency_s * ref_freq_hz;
    d.cpi_base_ref = std::max(cpi_total - cpi_mem, kMinCpiBase);
    return d;
}

}  // namespace mars
