#include "napsim/trace.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "napsim/report.hpp"

namespace napsim {

void LinkConfig::validate() const {
    if (!(capacity > 0.0))
        throw config_error("link: capacity must be > 0");
    if (!(packet_size > 0.0))
        throw config_error("link: packet size must be > 0");
    if (buffer_size < 1)
        throw config_error("link: buffer size must be >= 1");
}

void Trace::validate() const {
    if (!sizes.empty() && sizes.size() != arrivals.size())
        throw config_error("trace: size column length does not match arrivals");
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        if (arrivals[i] < 0.0)
            throw config_error("trace: negative timestamp");
        if (i > 0 && arrivals[i] < arrivals[i - 1])
            throw config_error("trace: timestamps must be non-decreasing");
    }
    for (double s : sizes)
        if (!(s > 0.0))
            throw config_error("trace: packet sizes must be > 0");
}

namespace {

constexpr std::string_view kSourcePrefix = "# source: ";

bool parse_field(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

[[noreturn]] void malformed(const std::string& name, std::size_t lineno, const std::string& what) {
    throw io_error(name + ": line " + std::to_string(lineno) + ": " + what);
}

} // namespace

Trace parse_trace(std::istream& in, const std::string& name) {
    Trace trace;
    trace.source = name;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        if (line[start] == '#') {
            std::string_view rest = std::string_view(line).substr(start);
            if (rest.starts_with(kSourcePrefix))
                trace.source = std::string(rest.substr(kSourcePrefix.size()));
            continue;
        }

        std::istringstream fields(line);
        std::string ts_text, size_text, extra;
        fields >> ts_text;
        bool has_size = static_cast<bool>(fields >> size_text);
        if (fields >> extra)
            malformed(name, lineno, "too many fields");

        double ts = 0.0;
        if (!parse_field(ts_text, ts) || !std::isfinite(ts))
            malformed(name, lineno, "bad timestamp '" + ts_text + "'");
        if (ts < 0.0)
            malformed(name, lineno, "negative timestamp");
        if (!trace.arrivals.empty() && ts < trace.arrivals.back())
            malformed(name, lineno, "decreasing timestamp");

        double size = 0.0;
        if (has_size) {
            if (!parse_field(size_text, size) || !(size > 0.0))
                malformed(name, lineno, "bad packet size '" + size_text + "'");
            if (trace.sizes.size() != trace.arrivals.size())
                malformed(name, lineno, "size column must appear on every line or none");
        } else if (!trace.sizes.empty()) {
            malformed(name, lineno, "size column must appear on every line or none");
        }

        trace.arrivals.push_back(ts);
        if (has_size)
            trace.sizes.push_back(size);
    }
    trace.validate();
    return trace;
}

Trace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open trace file '" + path.string() + "'");
    return parse_trace(in, path.string());
}

void save_trace(const Trace& trace, std::ostream& out) {
    if (!trace.source.empty())
        out << kSourcePrefix << trace.source << '\n';
    for (std::size_t i = 0; i < trace.arrivals.size(); ++i) {
        out << format_double(trace.arrivals[i]);
        if (!trace.sizes.empty())
            out << ' ' << format_double(trace.sizes[i]);
        out << '\n';
    }
}

std::string serialize_trace(const Trace& trace) {
    std::ostringstream out;
    save_trace(trace, out);
    return out.str();
}

Trace gen_poisson(double rate_per_s, double duration_s, std::uint64_t seed) {
    if (!(rate_per_s > 0.0))
        throw config_error("gen_poisson: rate must be > 0");
    if (!(duration_s > 0.0))
        throw config_error("gen_poisson: duration must be > 0");

    std::mt19937_64 rng(seed);
    Trace trace;
    trace.arrivals.reserve(static_cast<std::size_t>(rate_per_s * duration_s * 1.1) + 16);
    double t = 0.0;
    for (;;) {
        // 53-bit uniform centered in (0, 1); -log(u)/rate is Exponential(rate)
        // and strictly positive, so gaps never collapse to zero.
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        t += -std::log(u) / rate_per_s;
        if (t > duration_s)
            break;
        trace.arrivals.push_back(t);
    }
    trace.source = "poisson(rate=" + format_double(rate_per_s) +
                   ",duration=" + format_double(duration_s) +
                   ",seed=" + std::to_string(seed) + ")";
    return trace;
}

double occupancy_of(const Trace& trace, const LinkConfig& link) {
    if (trace.arrivals.empty())
        throw config_error("occupancy: trace is empty");
    double span = trace.arrivals.back() - trace.arrivals.front();
    if (!(span > 0.0))
        throw config_error("occupancy: trace span is zero");
    double bits = 0.0;
    if (trace.sizes.empty()) {
        bits = 8.0 * link.packet_size * static_cast<double>(trace.arrivals.size());
    } else {
        for (double s : trace.sizes)
            bits += 8.0 * s;
    }
    return bits / (link.capacity * span);
}

} // namespace napsim
