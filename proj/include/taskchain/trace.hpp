#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taskchain
{
    enum class TraceKind : std::uint8_t
    {
        Created,
        ExecStart,
        ExecEnd,
        Erased,
        SkipDependent,
        SkipBusy,
    };

    std::string_view to_string(TraceKind kind) noexcept;
    std::optional<TraceKind> parse_trace_kind(std::string_view text) noexcept;

    struct TraceEvent
    {
        std::uint64_t seq = 0;
        std::uint32_t worker_id = 0;
        std::uint64_t task_id = 0;
        TraceKind kind = TraceKind::Created;

        friend bool operator==(const TraceEvent &, const TraceEvent &) = default;
    };

    struct TraceParseError
    {
        std::size_t line = 0; // 1-based
        std::string message;
    };

    struct ParsedTrace
    {
        std::vector<TraceEvent> events;
        std::vector<TraceParseError> errors;
    };

    inline constexpr std::string_view kTraceHeader = "seq,worker_id,task_id,kind";

    /// Writes the header line followed by one "seq,worker_id,task_id,kind" line per event.
    void write_trace_csv(std::ostream &out, const std::vector<TraceEvent> &events);

    /// Parses a trace. A leading header line is accepted; blank lines are skipped.
    /// Malformed lines are collected in `errors` and do not abort parsing.
    ParsedTrace parse_trace_csv(std::istream &in);
}
