#pragma once

#include <span>
#include <vector>

namespace fracocp {

/// Read-only window onto `count` consecutive time entries of width `dim`.
struct SeqView {
    std::span<const double> data;
    int dim = 0;

    int count() const { return dim == 0 ? 0 : static_cast<int>(data.size()) / dim; }
    std::span<const double> operator[](int n) const { return data.subspan(std::size_t(n) * dim, dim); }
};

/// Time-indexed sequence of nodal vectors stored contiguously, entry-major.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(int entries, int dim) : entries_(entries), dim_(dim), data_(std::size_t(entries) * dim, 0.0) {}

    int entries() const { return entries_; }
    int dim() const { return dim_; }

    std::span<double> operator[](int n) { return {data_.data() + std::size_t(n) * dim_, std::size_t(dim_)}; }
    std::span<const double> operator[](int n) const {
        return {data_.data() + std::size_t(n) * dim_, std::size_t(dim_)};
    }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    SeqView view() const { return {data_, dim_}; }
    SeqView view(int first, int count) const {
        return {std::span<const double>(data_).subspan(std::size_t(first) * dim_, std::size_t(count) * dim_), dim_};
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    int entries_ = 0;
    int dim_ = 0;
    std::vector<double> data_;
};

}  // namespace fracocp
