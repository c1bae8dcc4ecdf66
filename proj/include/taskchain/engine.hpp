#pragma once

#include "taskchain/chain.hpp"
#include "taskchain/model.hpp"
#include "taskchain/trace.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

namespace taskchain
{
    struct EngineConfig
    {
        std::uint32_t n_workers = 1;
        std::uint32_t cycle_cap = 6;
        bool trace_enabled = false;
        // Zero disables the watchdog.
        std::chrono::nanoseconds watchdog{0};

        void validate() const
        {
            if (n_workers < 1)
                throw std::invalid_argument("n_workers must be at least 1");
            if (cycle_cap < 1)
                throw std::invalid_argument("cycle_cap must be at least 1");
            if (watchdog.count() < 0)
                throw std::invalid_argument("watchdog must be non-negative");
        }
    };

    enum class HandleOutcome : std::uint8_t
    {
        Execute,
        SkipDependent,
        SkipBusy,
    };

    struct CycleOutcome
    {
        enum class Kind : std::uint8_t
        {
            ExecutedOne,
            ExhaustedNoWork,
            CapReached,
            Aborted,
        };

        Kind kind;
        std::uint64_t task_id = 0; // valid for ExecutedOne
    };

    struct WorkerStats
    {
        std::uint64_t cycles = 0;
        std::uint64_t executed = 0;
        std::uint64_t created = 0;
        std::uint64_t cap_reached = 0;
        std::uint64_t skipped_dependent = 0;
        std::uint64_t skipped_busy = 0;
        std::uint32_t max_created_per_cycle = 0;
    };

    struct RunResult
    {
        std::uint64_t digest = 0;
        std::chrono::nanoseconds wall{0};
        bool aborted = false;
        std::uint64_t tasks_created = 0;
        std::uint64_t tasks_erased = 0;
        std::vector<TraceEvent> trace; // sorted by seq; empty unless tracing
        std::vector<WorkerStats> workers;
    };

    /// Runs a model on a shared chain with `n_workers` asynchronous workers.
    ///
    /// Lock order: enter guard before erase guard; occupancy guards in
    /// ascending task id; an occupancy guard before the erase guard. The erase
    /// guard is never held while blocking on an occupancy guard.
    template <SimulationModel Model>
    class Engine
    {
    public:
        using Recipe = typename Model::Recipe;
        using Record = typename Model::Record;
        using ChainType = Chain<Recipe>;
        using TaskType = typename ChainType::TaskType;
        using TaskPtr = typename ChainType::TaskPtr;

        struct Worker
        {
            Worker(std::uint32_t wid, Record r) : id(wid), record(std::move(r)) {}

            std::uint32_t id;
            Record record;
            std::uint32_t created_this_cycle = 0;
            // Task whose occupancy guard this worker holds, if any.
            TaskPtr position;
            WorkerStats stats;
            std::vector<TraceEvent> trace;
        };

        Engine(Model &model, EngineConfig config) : model_(model), config_(config)
        {
            config_.validate();
        }

        Engine(const Engine &) = delete;
        Engine &operator=(const Engine &) = delete;

        ChainType &chain() noexcept { return chain_; }
        const EngineConfig &config() const noexcept { return config_; }

        Worker make_worker(std::uint32_t id) const { return Worker(id, model_.make_record()); }

        /// Decides what `worker` does with `task`. The worker holds the task's
        /// occupancy guard, or has seen the task Executing. On Execute the
        /// phase has been set to Executing; otherwise the recipe was absorbed.
        HandleOutcome try_handle(Worker &worker, TaskType &task)
        {
            if (task.phase.load(std::memory_order_acquire) == Phase::Executing)
            {
                model_.absorb(worker.record, task.recipe);
                ++worker.stats.skipped_busy;
                emit(worker, task.id, TraceKind::SkipBusy);
                return HandleOutcome::SkipBusy;
            }
            if (model_.depends(worker.record, task.recipe))
            {
                model_.absorb(worker.record, task.recipe);
                ++worker.stats.skipped_dependent;
                emit(worker, task.id, TraceKind::SkipDependent);
                return HandleOutcome::SkipDependent;
            }
            task.phase.store(Phase::Executing, std::memory_order_release);
            return HandleOutcome::Execute;
        }

        /// One traversal from the head of the chain. Ends after one execution,
        /// at the end of the chain when nothing more may be created, or when
        /// the worker has created `cycle_cap` tasks in this cycle.
        CycleOutcome worker_cycle(Worker &worker)
        {
            model_.reset(worker.record);
            worker.created_this_cycle = 0;
            ++worker.stats.cycles;

            for (;;)
            {
                if (abort_.load(std::memory_order_relaxed))
                {
                    release_position(worker);
                    return {CycleOutcome::Kind::Aborted};
                }

                TaskPtr candidate;
                bool fresh = false;
                {
                    std::unique_lock erase_lock(chain_.erase_guard());
                    TaskPtr cur = worker.position ? worker.position->next : chain_.head_locked();
                    // Executing tasks are passed without taking occupancy.
                    while (cur && cur->phase.load(std::memory_order_acquire) == Phase::Executing)
                    {
                        try_handle(worker, *cur);
                        cur = cur->next;
                    }

                    if (cur)
                    {
                        candidate = std::move(cur);
                    }
                    else if (chain_.head_locked())
                    {
                        // Leaving the tail: extend the chain if allowed.
                        auto stop = stop_reason_locked(worker);
                        if (stop)
                        {
                            erase_lock.unlock();
                            release_position(worker);
                            return *stop;
                        }
                        auto recipe = model_.create();
                        if (!recipe)
                        {
                            exhausted_ = true;
                            erase_lock.unlock();
                            release_position(worker);
                            return {CycleOutcome::Kind::ExhaustedNoWork};
                        }
                        candidate = create_locked(worker, std::move(*recipe));
                        fresh = true;
                    }
                    else
                    {
                        // Empty chain. Holding a position implies a non-empty chain.
                        erase_lock.unlock();
                        auto entered = enter_empty_chain(worker);
                        if (!entered)
                            continue; // another worker filled the chain first
                        if (entered->index() == 0)
                            return std::get<0>(*entered);
                        candidate = std::get<1>(std::move(*entered));
                        fresh = true;
                    }
                }

                if (!fresh)
                {
                    // Hand-over-hand: take the successor before letting go of
                    // the current position.
                    candidate->occupancy.lock();
                    // `erased` is only written under the occupancy guard too.
                    if (candidate->erased || candidate->phase.load(std::memory_order_acquire) == Phase::Executing)
                    {
                        // Executed (or erased) in between; re-walk from the
                        // current position, which absorbs it if still linked.
                        candidate->occupancy.unlock();
                        continue;
                    }
                }
                release_position(worker);
                worker.position = std::move(candidate);

                switch (try_handle(worker, *worker.position))
                {
                case HandleOutcome::SkipDependent:
                case HandleOutcome::SkipBusy:
                    continue;
                case HandleOutcome::Execute:
                    return execute_and_erase(worker);
                }
            }
        }

        /// Runs the model to completion. The timed region starts with
        /// `model.prepare()` and ends when every worker has stopped.
        RunResult run()
        {
            RunResult result;
            std::vector<Worker> workers;
            workers.reserve(config_.n_workers);
            for (std::uint32_t i = 0; i < config_.n_workers; ++i)
                workers.push_back(make_worker(i));

            std::mutex done_mutex;
            std::condition_variable done_cv;
            std::uint32_t finished = 0;
            std::exception_ptr failure;

            const auto start = std::chrono::steady_clock::now();
            model_.prepare();
            {
                std::vector<std::jthread> threads;
                threads.reserve(workers.size());
                for (auto &worker : workers)
                {
                    threads.emplace_back([&, w = &worker] {
                        try
                        {
                            worker_loop(*w);
                        }
                        catch (...)
                        {
                            abort_.store(true);
                            std::lock_guard lock(done_mutex);
                            if (!failure)
                                failure = std::current_exception();
                        }
                        std::lock_guard lock(done_mutex);
                        ++finished;
                        done_cv.notify_all();
                    });
                }

                std::unique_lock lock(done_mutex);
                auto all_done = [&] { return finished == workers.size(); };
                if (config_.watchdog.count() > 0)
                {
                    if (!done_cv.wait_for(lock, config_.watchdog, all_done))
                    {
                        result.aborted = true;
                        abort_.store(true);
                        done_cv.wait(lock, all_done);
                    }
                }
                else
                {
                    done_cv.wait(lock, all_done);
                }
            }
            result.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::steady_clock::now() - start);

            if (failure)
                std::rethrow_exception(failure);

            {
                std::lock_guard lock(chain_.erase_guard());
                result.tasks_created = chain_.created_locked();
                result.tasks_erased = chain_.erased_count_locked();
            }
            result.digest = model_.digest();
            for (auto &worker : workers)
            {
                result.workers.push_back(worker.stats);
                result.trace.insert(result.trace.end(), worker.trace.begin(), worker.trace.end());
            }
            std::sort(result.trace.begin(), result.trace.end(),
                      [](const TraceEvent &a, const TraceEvent &b) { return a.seq < b.seq; });
            return result;
        }

        /// Asks all workers to stop at their next cycle boundary.
        void request_abort() noexcept { abort_.store(true); }

    private:
        using EnterResult = std::variant<CycleOutcome, TaskPtr>;

        void worker_loop(Worker &worker)
        {
            for (;;)
            {
                const CycleOutcome outcome = worker_cycle(worker);
                switch (outcome.kind)
                {
                case CycleOutcome::Kind::ExecutedOne:
                    break;
                case CycleOutcome::Kind::Aborted:
                    return;
                case CycleOutcome::Kind::CapReached:
                    ++worker.stats.cap_reached;
                    std::this_thread::yield();
                    break;
                case CycleOutcome::Kind::ExhaustedNoWork:
                    if (finished())
                        return;
                    std::this_thread::yield();
                    break;
                }
            }
        }

        // Model exhausted and chain empty. Checked under the enter guard so a
        // worker cannot miss a task created from the empty chain.
        bool finished()
        {
            std::lock_guard enter(chain_.enter_guard());
            std::lock_guard lock(chain_.erase_guard());
            return exhausted_ && !chain_.head_locked();
        }

        std::optional<CycleOutcome> stop_reason_locked(const Worker &worker) const
        {
            if (exhausted_)
                return CycleOutcome{CycleOutcome::Kind::ExhaustedNoWork};
            if (worker.created_this_cycle >= config_.cycle_cap)
                return CycleOutcome{CycleOutcome::Kind::CapReached};
            return std::nullopt;
        }

        TaskPtr create_locked(Worker &worker, Recipe recipe)
        {
            TaskPtr task = chain_.append_locked(std::move(recipe), true);
            ++worker.created_this_cycle;
            ++worker.stats.created;
            worker.stats.max_created_per_cycle =
                std::max(worker.stats.max_created_per_cycle, worker.created_this_cycle);
            emit(worker, task->id, TraceKind::Created);
            return task;
        }

        // Creates the first task of an empty chain under the enter guard.
        // Returns nullopt when the chain was filled by someone else meanwhile.
        std::optional<EnterResult> enter_empty_chain(Worker &worker)
        {
            std::lock_guard enter(chain_.enter_guard());
            std::lock_guard lock(chain_.erase_guard());
            if (chain_.head_locked())
                return std::nullopt;
            if (auto stop = stop_reason_locked(worker))
                return EnterResult{*stop};
            auto recipe = model_.create();
            if (!recipe)
            {
                exhausted_ = true;
                return EnterResult{CycleOutcome{CycleOutcome::Kind::ExhaustedNoWork}};
            }
            return EnterResult{create_locked(worker, std::move(*recipe))};
        }

        CycleOutcome execute_and_erase(Worker &worker)
        {
            TaskPtr task = std::move(worker.position);
            emit(worker, task->id, TraceKind::ExecStart);
            task->occupancy.unlock();

            model_.execute(task->recipe);
            emit(worker, task->id, TraceKind::ExecEnd);
            ++worker.stats.executed;

            std::lock_guard occupied(task->occupancy);
            std::lock_guard lock(chain_.erase_guard());
            chain_.unlink_locked(*task);
            emit(worker, task->id, TraceKind::Erased);
            return {CycleOutcome::Kind::ExecutedOne, task->id};
        }

        void release_position(Worker &worker)
        {
            if (worker.position)
            {
                worker.position->occupancy.unlock();
                worker.position.reset();
            }
        }

        void emit(Worker &worker, std::uint64_t task_id, TraceKind kind)
        {
            if (!config_.trace_enabled)
                return;
            const std::uint64_t seq = seq_.fetch_add(1, std::memory_order_acq_rel);
            worker.trace.push_back(TraceEvent{seq, worker.id, task_id, kind});
        }

        Model &model_;
        EngineConfig config_;
        ChainType chain_;
        bool exhausted_ = false; // guarded by the erase guard
        std::atomic<bool> abort_{false};
        std::atomic<std::uint64_t> seq_{0};
    };

    template <SimulationModel Model>
    RunResult run(Model &model, const EngineConfig &config)
    {
        Engine<Model> engine(model, config);
        return engine.run();
    }
}
