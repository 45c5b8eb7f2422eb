#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <cstring>
#include <new>
#include <utility>

#include "dom2/errors.hpp"

namespace dom2 {

// Minimal row-major matrix with 64-byte aligned storage. Rows are contiguous
// with no padding; SIMD kernels handle tails themselves.
template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) { resize(rows, cols); }

    Mat(const Mat& o) { assign(o); }
    Mat& operator=(const Mat& o) {
        if (this != &o) assign(o);
        return *this;
    }
    Mat(Mat&& o) noexcept { swap(o); }
    Mat& operator=(Mat&& o) noexcept {
        swap(o);
        return *this;
    }
    ~Mat() { dealloc(); }

    void resize(int rows, int cols) {
        DOM2_REQUIRE(rows >= 0 && cols >= 0, "Mat: negative shape");
        const size_t need = static_cast<size_t>(rows) * cols;
        if (need > cap_) {
            dealloc();
            cap_ = need;
            data_ = static_cast<T*>(std::aligned_alloc(64, round_up(cap_ * sizeof(T), 64)));
            if (!data_ && need) throw std::bad_alloc();
        }
        rows_ = rows;
        cols_ = cols;
    }

    void zero() { std::memset(data_, 0, size() * sizeof(T)); }
    void fill(T v) { std::fill(data_, data_ + size(), v); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return static_cast<size_t>(rows_) * cols_; }

    T* data() { return data_; }
    const T* data() const { return data_; }
    T* row(int r) { return data_ + static_cast<size_t>(r) * cols_; }
    const T* row(int r) const { return data_ + static_cast<size_t>(r) * cols_; }

    T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    void swap(Mat& o) noexcept {
        std::swap(data_, o.data_);
        std::swap(rows_, o.rows_);
        std::swap(cols_, o.cols_);
        std::swap(cap_, o.cap_);
    }

  private:
    static size_t round_up(size_t n, size_t a) { return (n + a - 1) / a * a; }

    void assign(const Mat& o) {
        resize(o.rows_, o.cols_);
        std::memcpy(data_, o.data_, size() * sizeof(T));
    }

    void dealloc() {
        std::free(data_);
        data_ = nullptr;
        cap_ = 0;
    }

    T* data_ = nullptr;
    int rows_ = 0;
    int cols_ = 0;
    size_t cap_ = 0;
};

} // namespace dom2
