#pragma once

#include <atomic>
#include <cstddef>
#include <new>
#include <vector>

namespace se3h {

// Process-wide byte counters for field storage. Used by the memory benchmark.
struct MemoryStats {
    static std::atomic<std::size_t>& current() {
        static std::atomic<std::size_t> v{0};
        return v;
    }
    static std::atomic<std::size_t>& peak() {
        static std::atomic<std::size_t> v{0};
        return v;
    }
    static void reset_peak() { peak().store(current().load()); }
    static void add(std::size_t n) {
        std::size_t now = current().fetch_add(n) + n;
        std::size_t p = peak().load();
        while (now > p && !peak().compare_exchange_weak(p, now)) {
        }
    }
    static void sub(std::size_t n) { current().fetch_sub(n); }
};

template <class T>
struct TrackedAllocator {
    using value_type = T;
    TrackedAllocator() = default;
    template <class U>
    TrackedAllocator(const TrackedAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        MemoryStats::add(n * sizeof(T));
        return static_cast<T*>(::operator new(n * sizeof(T)));
    }
    void deallocate(T* p, std::size_t n) noexcept {
        MemoryStats::sub(n * sizeof(T));
        ::operator delete(p);
    }
    template <class U>
    bool operator==(const TrackedAllocator<U>&) const noexcept {
        return true;
    }
};

template <class T>
using Buffer = std::vector<T, TrackedAllocator<T>>;

}  // namespace se3h
