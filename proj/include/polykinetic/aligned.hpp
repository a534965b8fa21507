#pragma once

#include <cstddef>
#include <cstdlib>
#include <new>
#include <vector>

namespace polykinetic {

// 64-byte aligned storage so AVX2 loads and FFTW never straddle cache lines.
template <class T, std::size_t Align = 64>
struct AlignedAllocator {
    using value_type = T;

    template <class U>
    struct rebind {
        using other = AlignedAllocator<U, Align>;
    };

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U, Align>&) noexcept {}

    T* allocate(std::size_t n)
    {
        std::size_t bytes = ((n * sizeof(T) + Align - 1) / Align) * Align;
        if (bytes == 0) bytes = Align;
        void* p = std::aligned_alloc(Align, bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U, Align>&) const noexcept { return true; }
    template <class U>
    bool operator!=(const AlignedAllocator<U, Align>&) const noexcept { return false; }
};

using RealVector = std::vector<double, AlignedAllocator<double>>;

} // namespace polykinetic
