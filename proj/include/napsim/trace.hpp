#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "napsim/errors.hpp"

namespace napsim {

/// One simulated link: nominal bandwidth, packet size and transmission buffer.
struct LinkConfig {
    double capacity = 1e9;      ///< bits per second
    double packet_size = 1000;  ///< bytes, used when a trace carries no sizes
    int buffer_size = 350;      ///< B, packets (the in-service packet counts)

    double service_time() const { return 8.0 * packet_size / capacity; }
    double service_time_for(double size_bytes) const { return 8.0 * size_bytes / capacity; }
    void validate() const;
};

/// Ordered packet arrival timestamps, optionally with per-packet sizes.
struct Trace {
    std::vector<double> arrivals;  ///< seconds, non-decreasing, all >= 0
    std::vector<double> sizes;     ///< bytes; empty, or one entry per arrival
    std::string source;            ///< provenance label

    void validate() const;
};

/// Parse the text trace format: one record per line,
/// `<timestamp-seconds> [<size-bytes>]`, `#` comments, LF or CRLF endings.
/// A `# source:` comment restores the provenance label.
Trace parse_trace(std::istream& in, const std::string& name);
Trace load_trace(const std::filesystem::path& path);

void save_trace(const Trace& trace, std::ostream& out);
std::string serialize_trace(const Trace& trace);

/// Seeded Poisson arrival process over (0, duration]: exponential gaps with
/// mean 1/rate drawn by inverting 53-bit uniforms from a std::mt19937_64, so
/// identical (rate, duration, seed) give identical traces byte for byte.
Trace gen_poisson(double rate_per_s, double duration_s, std::uint64_t seed);

/// Offered load: total bits across all packets divided by capacity times the
/// trace span. Rejects traces whose span is zero.
double occupancy_of(const Trace& trace, const LinkConfig& link);

} // namespace napsim
