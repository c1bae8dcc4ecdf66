#include "taskchain/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

namespace taskchain
{
    namespace
    {
        constexpr std::array<std::string_view, 6> kKindNames = {
            "Created", "ExecStart", "ExecEnd", "Erased", "SkipDependent", "SkipBusy",
        };

        template <class T>
        bool parse_uint(std::string_view text, T &out)
        {
            if (text.empty())
                return false;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
            return ec == std::errc{} && ptr == text.data() + text.size();
        }
    }

    std::string_view to_string(TraceKind kind) noexcept
    {
        return kKindNames[static_cast<std::size_t>(kind)];
    }

    std::optional<TraceKind> parse_trace_kind(std::string_view text) noexcept
    {
        for (std::size_t i = 0; i < kKindNames.size(); ++i)
            if (kKindNames[i] == text)
                return static_cast<TraceKind>(i);
        return std::nullopt;
    }

    void write_trace_csv(std::ostream &out, const std::vector<TraceEvent> &events)
    {
        out << kTraceHeader << '\n';
        for (const auto &e : events)
            out << e.seq << ',' << e.worker_id << ',' << e.task_id << ',' << to_string(e.kind) << '\n';
    }

    ParsedTrace parse_trace_csv(std::istream &in)
    {
        ParsedTrace parsed;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            if (lineno == 1 && line == kTraceHeader)
                continue;

            std::vector<std::string_view> fields;
            std::string_view rest = line;
            for (;;)
            {
                const auto comma = rest.find(',');
                fields.push_back(rest.substr(0, comma));
                if (comma == std::string_view::npos)
                    break;
                rest.remove_prefix(comma + 1);
            }
            if (fields.size() != 4)
            {
                parsed.errors.push_back({lineno, "expected 4 comma-separated fields, got " +
                                                     std::to_string(fields.size())});
                continue;
            }

            TraceEvent ev;
            if (!parse_uint(fields[0], ev.seq))
            {
                parsed.errors.push_back({lineno, "invalid seq '" + std::string(fields[0]) + "'"});
                continue;
            }
            if (!parse_uint(fields[1], ev.worker_id))
            {
                parsed.errors.push_back({lineno, "invalid worker_id '" + std::string(fields[1]) + "'"});
                continue;
            }
            if (!parse_uint(fields[2], ev.task_id))
            {
                parsed.errors.push_back({lineno, "invalid task_id '" + std::string(fields[2]) + "'"});
                continue;
            }
            auto kind = parse_trace_kind(fields[3]);
            if (!kind)
            {
                parsed.errors.push_back({lineno, "unknown kind '" + std::string(fields[3]) + "'"});
                continue;
            }
            ev.kind = *kind;
            parsed.events.push_back(ev);
        }
        return parsed;
    }
}
