#include "taskchain/bench.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace taskchain::bench
{
    namespace
    {
        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ','))
                out.push_back(field);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        std::string format_double(double v)
        {
            if (std::isnan(v))
                return "nan";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }
    }

    MeanSem mean_sem(std::span<const double> values)
    {
        MeanSem r;
        const auto count = values.size();
        if (count == 0)
            return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        double sum = 0.0;
        for (double v : values)
            sum += v;
        r.mean = sum / static_cast<double>(count);
        if (count < 2)
        {
            r.sem = std::numeric_limits<double>::quiet_NaN();
            return r;
        }
        double ss = 0.0;
        for (double v : values)
            ss += (v - r.mean) * (v - r.mean);
        const double sd = std::sqrt(ss / static_cast<double>(count - 1));
        r.sem = sd / std::sqrt(static_cast<double>(count));
        return r;
    }

    std::vector<SummaryRow> summarize(std::span<const ResultRow> rows, std::vector<std::string> &warnings)
    {
        using Key = std::tuple<std::string, std::uint64_t, std::uint32_t>;
        std::vector<Key> order;
        std::map<Key, std::vector<double>> cells;
        for (const auto &row : rows)
        {
            Key key{row.model, row.s, row.n};
            auto [it, inserted] = cells.try_emplace(key);
            if (inserted)
                order.push_back(key);
            if (!row.aborted())
                it->second.push_back(row.wall_ms);
        }

        std::vector<SummaryRow> out;
        for (const auto &key : order)
        {
            const auto &values = cells[key];
            const auto &[model, s, n] = key;
            const auto stats = mean_sem(values);
            out.push_back({model, s, n, stats.mean, stats.sem, values.size()});
            if (values.size() < 2)
            {
                warnings.push_back("cell model=" + model + " s=" + std::to_string(s) + " n=" + std::to_string(n) +
                                   " has " + std::to_string(values.size()) + " usable run(s)");
            }
        }
        return out;
    }

    void write_summary_csv(std::ostream &out, std::span<const SummaryRow> rows)
    {
        out << kSummaryHeader << '\n';
        for (const auto &r : rows)
            out << r.model << ',' << r.s << ',' << r.n << ',' << format_double(r.mean_ms) << ','
                << format_double(r.sem_ms) << ',' << r.runs << '\n';
    }

    std::vector<ResultRow> read_results_csv(std::istream &in)
    {
        std::vector<ResultRow> rows;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            if (lineno == 1)
            {
                if (line != kResultHeader)
                    throw std::runtime_error("line 1: expected header '" + std::string(kResultHeader) + "'");
                continue;
            }
            const auto f = split(line);
            if (f.size() != 7)
                throw std::runtime_error("line " + std::to_string(lineno) + ": expected 7 fields");
            try
            {
                ResultRow r;
                r.model = f[0];
                r.s = std::stoull(f[1]);
                r.n = static_cast<std::uint32_t>(std::stoul(f[2]));
                r.seed = std::stoull(f[3]);
                r.steps = std::stoull(f[4]);
                r.wall_ms = std::stod(f[5]);
                r.digest = std::stoull(f[6], nullptr, 16);
                rows.push_back(std::move(r));
            }
            catch (const std::logic_error &)
            {
                throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
            }
        }
        if (lineno == 0)
            throw std::runtime_error("empty results file");
        return rows;
    }
}
