#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace mazedash {

// Logical byte accounting for solver data structures. Containers that make
// up a solver's working state register their capacity here, so `peak()` is a
// portable stand-in for the solver's memory footprint (independent of the
// allocator or the OS page accounting).
class MemoryMeter {
public:
    void add(std::int64_t bytes) {
        current_ += bytes;
        if (current_ > peak_) peak_ = current_;
    }
    void sub(std::int64_t bytes) { current_ -= bytes; }

    std::int64_t current() const { return current_; }
    std::int64_t peak() const { return peak_; }

    void reset() {
        current_ = 0;
        peak_ = 0;
    }

private:
    std::int64_t current_ = 0;
    std::int64_t peak_ = 0;
};

// std::vector wrapper that reports its capacity to a MemoryMeter. The meter
// may be null, in which case this is a plain vector.
template <typename T>
class TrackedVec {
public:
    explicit TrackedVec(MemoryMeter* meter = nullptr) : meter_(meter) {}

    TrackedVec(const TrackedVec&) = delete;
    TrackedVec& operator=(const TrackedVec&) = delete;

    TrackedVec(TrackedVec&& other) noexcept
        : vec_(std::move(other.vec_)), meter_(other.meter_), accounted_(other.accounted_) {
        other.meter_ = nullptr;
        other.accounted_ = 0;
    }
    TrackedVec& operator=(TrackedVec&& other) noexcept {
        if (this != &other) {
            release();
            vec_ = std::move(other.vec_);
            meter_ = other.meter_;
            accounted_ = other.accounted_;
            other.meter_ = nullptr;
            other.accounted_ = 0;
        }
        return *this;
    }

    ~TrackedVec() { release(); }

    void reserve(std::size_t n) {
        vec_.reserve(n);
        sync();
    }
    void resize(std::size_t n, const T& value = T()) {
        vec_.resize(n, value);
        sync();
    }
    void push_back(const T& value) {
        vec_.push_back(value);
        sync();
    }
    void pop_back() { vec_.pop_back(); }
    void clear() { vec_.clear(); }

    std::size_t size() const { return vec_.size(); }
    bool empty() const { return vec_.empty(); }
    T& operator[](std::size_t i) { return vec_[i]; }
    const T& operator[](std::size_t i) const { return vec_[i]; }
    T& back() { return vec_.back(); }
    const T& back() const { return vec_.back(); }
    const T* data() const { return vec_.data(); }

    auto begin() const { return vec_.begin(); }
    auto end() const { return vec_.end(); }

    const std::vector<T>& raw() const { return vec_; }

private:
    void sync() {
        if (!meter_) return;
        std::int64_t bytes = static_cast<std::int64_t>(vec_.capacity() * sizeof(T));
        if (bytes != accounted_) {
            if (bytes > accounted_)
                meter_->add(bytes - accounted_);
            else
                meter_->sub(accounted_ - bytes);
            accounted_ = bytes;
        }
    }
    void release() {
        if (meter_ && accounted_ != 0) {
            meter_->sub(accounted_);
            accounted_ = 0;
        }
    }

    std::vector<T> vec_;
    MemoryMeter* meter_ = nullptr;
    std::int64_t accounted_ = 0;
};

}  // namespace mazedash
