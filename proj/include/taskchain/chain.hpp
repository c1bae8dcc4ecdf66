#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace taskchain
{
    enum class Phase : std::uint8_t
    {
        Pending,
        Executing,
    };

    /// One element of the chain. The recipe is immutable after creation.
    ///
    /// Link fields and `erased` are guarded by the owning chain's erase guard.
    /// `phase` only moves Pending -> Executing and is written while holding
    /// `occupancy`; it is atomic because traversals read it without occupancy.
    template <class Recipe>
    struct Task
    {
        Task(std::uint64_t task_id, Recipe r) : id(task_id), recipe(std::move(r)) {}

        Task(const Task &) = delete;
        Task &operator=(const Task &) = delete;

        const std::uint64_t id;
        const Recipe recipe;
        std::atomic<Phase> phase{Phase::Pending};
        std::mutex occupancy;

        std::shared_ptr<Task> next;
        Task *prev = nullptr;
        bool erased = false;
    };

    /// Bidirectional linked chain of tasks with the enter and erase guards.
    ///
    /// Members suffixed `_locked` require the caller to hold `erase_guard()`.
    /// Tasks are reference counted so that a worker holding a pointer to a task
    /// that gets unlinked concurrently never dereferences freed memory; it
    /// observes `erased == true` instead.
    template <class Recipe>
    class Chain
    {
    public:
        using TaskType = Task<Recipe>;
        using TaskPtr = std::shared_ptr<TaskType>;

        Chain() = default;
        Chain(const Chain &) = delete;
        Chain &operator=(const Chain &) = delete;

        ~Chain()
        {
            // Unlink iteratively; a long chain would otherwise recurse through
            // the shared_ptr destructors.
            TaskPtr cur = std::move(head_);
            tail_.reset();
            while (cur)
            {
                TaskPtr next = std::move(cur->next);
                cur = std::move(next);
            }
        }

        std::mutex &enter_guard() noexcept { return enter_guard_; }
        std::mutex &erase_guard() noexcept { return erase_guard_; }

        const TaskPtr &head_locked() const noexcept { return head_; }
        const TaskPtr &tail_locked() const noexcept { return tail_; }
        std::uint64_t created_locked() const noexcept { return created_; }
        std::uint64_t erased_count_locked() const noexcept { return erased_; }

        /// Appends a new Pending task at the tail and returns it. The new
        /// task's id is the number of tasks created so far. If `lock_occupancy`
        /// is set the task's occupancy guard is taken before the task becomes
        /// reachable, so it cannot block.
        TaskPtr append_locked(Recipe recipe, bool lock_occupancy)
        {
            auto task = std::make_shared<TaskType>(created_, std::move(recipe));
            if (lock_occupancy)
                task->occupancy.lock();
            ++created_;
            task->prev = tail_.get();
            if (tail_)
                tail_->next = task;
            else
                head_ = task;
            tail_ = task;
            return task;
        }

        /// Splices `task` out of the chain. The caller must also hold the
        /// task's occupancy guard. The task keeps its `next` link so that
        /// holders of stale pointers can still reach later tasks.
        void unlink_locked(TaskType &task)
        {
            const TaskPtr keep_alive = owner_of(task);
            TaskType *prev = task.prev;
            const TaskPtr &next = task.next;
            if (next)
                next->prev = prev;
            else
                tail_ = prev ? owner_of(*prev) : TaskPtr{};

            if (prev)
                prev->next = next;
            else
                head_ = next;

            task.prev = nullptr;
            task.erased = true;
            ++erased_;
        }

        /// Convenience wrapper taking the erase guard.
        std::uint64_t append(Recipe recipe)
        {
            std::lock_guard lock(erase_guard_);
            return append_locked(std::move(recipe), false)->id;
        }

        /// Convenience wrapper taking the task's occupancy guard and the erase
        /// guard, in that order.
        void erase(TaskType &task)
        {
            std::lock_guard occupied(task.occupancy);
            std::lock_guard lock(erase_guard_);
            unlink_locked(task);
        }

        /// Ids from head to tail. Takes the erase guard.
        std::vector<std::uint64_t> ids()
        {
            std::lock_guard lock(erase_guard_);
            std::vector<std::uint64_t> out;
            for (TaskType *t = head_.get(); t; t = t->next.get())
                out.push_back(t->id);
            return out;
        }

        /// Task with the given id, or null. Takes the erase guard.
        TaskPtr find(std::uint64_t id)
        {
            std::lock_guard lock(erase_guard_);
            for (TaskPtr t = head_; t; t = t->next)
                if (t->id == id)
                    return t;
            return {};
        }

        std::size_t size()
        {
            std::lock_guard lock(erase_guard_);
            return static_cast<std::size_t>(created_ - erased_);
        }

        bool empty()
        {
            std::lock_guard lock(erase_guard_);
            return !head_;
        }

    private:
        // The owning pointer of a linked task is held by its predecessor, or by head_.
        TaskPtr owner_of(TaskType &task) const
        {
            return task.prev ? task.prev->next : head_;
        }

        TaskPtr head_;
        TaskPtr tail_;
        std::uint64_t created_ = 0;
        std::uint64_t erased_ = 0;
        std::mutex enter_guard_;
        std::mutex erase_guard_;
    };
}
