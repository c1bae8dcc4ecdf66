#pragma once

#include "taskchain/trace.hpp"
#include "taskchain/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace testing_support
{
    /// Returns a copy of a valid trace in which `count` distinct tasks i have
    /// their ExecEnd and Erased events moved to just after the ExecStart of
    /// their earliest-starting dependent task. Each move breaks exactly one
    /// dependent pair and no lifecycle rule. Sequence numbers are renumbered.
    /// Returns nullopt if fewer than `count` tasks have dependents.
    inline std::optional<std::vector<taskchain::TraceEvent>>
    inject_reorderings(const std::vector<taskchain::TraceEvent> &trace, const taskchain::GroundTruthDeps &deps,
                       std::size_t count)
    {
        using taskchain::TraceKind;
        std::unordered_map<std::uint64_t, std::uint64_t> start_seq;
        for (const auto &e : trace)
            if (e.kind == TraceKind::ExecStart)
                start_seq[e.task_id] = e.seq;

        // Earliest-starting dependent of each task.
        std::unordered_map<std::uint64_t, std::uint64_t> first_dependent_start;
        for (const auto &[i, j] : deps.pairs)
        {
            const auto s = start_seq.at(j);
            auto [it, inserted] = first_dependent_start.emplace(i, s);
            if (!inserted)
                it->second = std::min(it->second, s);
        }
        if (first_dependent_start.size() < count)
            return std::nullopt;

        std::vector<std::uint64_t> candidates;
        for (const auto &[i, s] : first_dependent_start)
            candidates.push_back(i);
        std::sort(candidates.begin(), candidates.end());
        std::unordered_map<std::uint64_t, std::uint64_t> moved; // task -> anchor seq
        const std::size_t stride = candidates.size() / count;
        for (std::size_t k = 0; k < count; ++k)
        {
            const auto i = candidates[k * stride];
            moved[i] = first_dependent_start.at(i);
        }

        struct Keyed
        {
            std::uint64_t primary;
            int secondary;
            taskchain::TraceEvent event;
        };
        std::vector<Keyed> keyed;
        keyed.reserve(trace.size());
        for (const auto &e : trace)
        {
            auto it = moved.find(e.task_id);
            if (it != moved.end() && e.kind == TraceKind::ExecEnd)
                keyed.push_back({it->second, 1, e});
            else if (it != moved.end() && e.kind == TraceKind::Erased)
                keyed.push_back({it->second, 2, e});
            else
                keyed.push_back({e.seq, 0, e});
        }
        std::sort(keyed.begin(), keyed.end(), [](const Keyed &a, const Keyed &b) {
            return std::tie(a.primary, a.secondary, a.event.task_id) <
                   std::tie(b.primary, b.secondary, b.event.task_id);
        });
        std::vector<taskchain::TraceEvent> out;
        out.reserve(keyed.size());
        for (std::size_t k = 0; k < keyed.size(); ++k)
        {
            auto e = keyed[k].event;
            e.seq = k;
            out.push_back(e);
        }
        return out;
    }
}
