#include "taskchain/verify.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace taskchain
{
    namespace
    {
        constexpr std::uint64_t kMissing = std::numeric_limits<std::uint64_t>::max();

        void append_sorted_unique(GroundTruthDeps &deps, std::uint64_t j, std::vector<std::uint64_t> &preds)
        {
            std::sort(preds.begin(), preds.end());
            preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
            for (auto i : preds)
                deps.pairs.emplace_back(i, j);
        }

        std::string_view kind_name(Violation::Kind k)
        {
            switch (k)
            {
            case Violation::Kind::Order:
                return "order";
            case Violation::Kind::Lifecycle:
                return "lifecycle";
            case Violation::Kind::Creation:
                return "creation";
            }
            return "?";
        }
    }

    ModelKind parse_model_kind(std::string_view name)
    {
        if (name == "cultural")
            return ModelKind::Cultural;
        if (name == "sir")
            return ModelKind::Sir;
        throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
    }

    std::string_view to_string(ModelKind kind) noexcept
    {
        return kind == ModelKind::Cultural ? "cultural" : "sir";
    }

    GroundTruthDeps ground_truth_deps(std::span<const CulturalRecipe> log)
    {
        GroundTruthDeps deps;
        deps.task_count = log.size();
        std::uint32_t agents = 0;
        for (const auto &r : log)
            agents = std::max({agents, r.source + 1, r.target + 1});

        std::vector<std::vector<std::uint64_t>> writers(agents), readers(agents);
        std::vector<std::uint64_t> preds;
        for (std::uint64_t j = 0; j < log.size(); ++j)
        {
            const auto &r = log[j];
            preds.clear();
            preds.insert(preds.end(), writers[r.source].begin(), writers[r.source].end());
            preds.insert(preds.end(), writers[r.target].begin(), writers[r.target].end());
            preds.insert(preds.end(), readers[r.target].begin(), readers[r.target].end());
            append_sorted_unique(deps, j, preds);
            writers[r.target].push_back(j);
            readers[r.source].push_back(j);
        }
        return deps;
    }

    GroundTruthDeps ground_truth_deps(std::span<const SirRecipe> log, const Partition &partition)
    {
        GroundTruthDeps deps;
        deps.task_count = log.size();
        const std::uint32_t m = partition.n_subsets();
        std::vector<std::vector<std::uint64_t>> computes(m), commits(m);
        std::vector<std::uint64_t> preds;
        for (std::uint64_t j = 0; j < log.size(); ++j)
        {
            const auto &r = log[j];
            if (r.subset >= m)
                throw std::invalid_argument("sir recipe subset out of range");
            const bool compute = r.phase == SirPhase::ComputeNew;
            auto &same = compute ? computes : commits;
            auto &other = compute ? commits : computes;
            preds.assign(same[r.subset].begin(), same[r.subset].end());
            for (auto y : partition.adjacent_subsets(r.subset))
                preds.insert(preds.end(), other[y].begin(), other[y].end());
            append_sorted_unique(deps, j, preds);
            same[r.subset].push_back(j);
        }
        return deps;
    }

    ValidationReport validate_trace(std::span<const TraceEvent> trace, const GroundTruthDeps &deps)
    {
        ValidationReport report;
        report.events = trace.size();

        std::vector<TraceEvent> events(trace.begin(), trace.end());
        std::stable_sort(events.begin(), events.end(),
                         [](const TraceEvent &a, const TraceEvent &b) { return a.seq < b.seq; });

        std::uint64_t n = deps.task_count;
        for (const auto &e : events)
            n = std::max(n, e.task_id + 1);
        report.tasks = n;

        // seq of each lifecycle event per task: Created, ExecStart, ExecEnd, Erased.
        std::vector<std::array<std::uint64_t, 4>> seen(n, {kMissing, kMissing, kMissing, kMissing});
        auto add = [&](Violation::Kind kind, std::uint64_t task, std::uint64_t other, std::string msg) {
            switch (kind)
            {
            case Violation::Kind::Order:
                ++report.order_violations;
                break;
            case Violation::Kind::Lifecycle:
                ++report.lifecycle_violations;
                break;
            case Violation::Kind::Creation:
                ++report.creation_violations;
                break;
            }
            report.violations.push_back({kind, task, other, std::move(msg)});
        };

        std::uint64_t last_created = kMissing;
        for (const auto &e : events)
        {
            const auto slot = static_cast<std::size_t>(e.kind);
            if (slot >= 4)
                continue; // skip events carry no lifecycle meaning
            auto &s = seen[e.task_id];
            if (s[slot] != kMissing)
            {
                add(Violation::Kind::Lifecycle, e.task_id, 0,
                    "duplicate " + std::string(to_string(e.kind)) + " at seq " + std::to_string(e.seq));
                continue;
            }
            s[slot] = e.seq;
            if (e.kind == TraceKind::Created)
            {
                if (last_created != kMissing && e.task_id <= last_created)
                    add(Violation::Kind::Creation, e.task_id, last_created,
                        "created after task " + std::to_string(last_created));
                last_created = e.task_id;
            }
        }

        static constexpr std::array<TraceKind, 4> kOrder = {TraceKind::Created, TraceKind::ExecStart,
                                                            TraceKind::ExecEnd, TraceKind::Erased};
        for (std::uint64_t t = 0; t < n; ++t)
        {
            const auto &s = seen[t];
            for (std::size_t k = 0; k < 4; ++k)
                if (s[k] == kMissing)
                    add(Violation::Kind::Lifecycle, t, 0, "missing " + std::string(to_string(kOrder[k])));
            for (std::size_t k = 1; k < 4; ++k)
                if (s[k - 1] != kMissing && s[k] != kMissing && s[k - 1] >= s[k])
                    add(Violation::Kind::Lifecycle, t, 0,
                        std::string(to_string(kOrder[k])) + " not after " + std::string(to_string(kOrder[k - 1])));
        }

        for (const auto &[i, j] : deps.pairs)
        {
            ++report.pairs_checked;
            const auto end_i = seen[i][2];
            const auto start_j = seen[j][1];
            if (end_i == kMissing || start_j == kMissing)
                continue; // already reported as lifecycle violations
            if (end_i >= start_j)
                add(Violation::Kind::Order, j, i,
                    "ExecStart at seq " + std::to_string(start_j) + " precedes ExecEnd of task " +
                        std::to_string(i) + " at seq " + std::to_string(end_i));
        }
        return report;
    }

    void write_report(std::ostream &out, const ValidationReport &report)
    {
        out << "status: " << (report.ok() ? "OK" : "VIOLATIONS") << '\n'
            << "events: " << report.events << '\n'
            << "tasks: " << report.tasks << '\n'
            << "dependence pairs checked: " << report.pairs_checked << '\n'
            << "order violations: " << report.order_violations << '\n'
            << "lifecycle violations: " << report.lifecycle_violations << '\n'
            << "creation violations: " << report.creation_violations << '\n'
            << "parse errors: " << report.parse_errors.size() << '\n';
        for (const auto &e : report.parse_errors)
            out << "parse line " << e.line << ": " << e.message << '\n';
        for (const auto &v : report.violations)
        {
            out << kind_name(v.kind) << " task " << v.task;
            if (v.kind == Violation::Kind::Order)
                out << " after " << v.other;
            out << ": " << v.message << '\n';
        }
    }
}
