#ifndef FLOWSIM_DELAY_LINE_HPP
#define FLOWSIM_DELAY_LINE_HPP

#include <cstddef>
#include <deque>

namespace flowsim {

/// Fixed-depth delivery queue for timestamped payloads. One payload is
/// pushed per tick; view(k) returns the payload pushed k ticks ago, or the
/// oldest available one while the line is still warming up.
template <typename Payload>
class DelayLine {
  public:
    /// `max_depth` is the deepest view the line must serve.
    explicit DelayLine(int max_depth) : max_depth_(max_depth < 0 ? 0 : max_depth) {}

    void push(Payload p) {
        buf_.push_back(std::move(p));
        while (buf_.size() > static_cast<std::size_t>(max_depth_) + 1) {
            buf_.pop_front();
        }
    }

    /// Payload from `depth` ticks ago (0 = most recent push).
    const Payload& view(int depth) const {
        const std::size_t n = buf_.size();
        std::size_t idx = 0;
        if (depth >= 0 && static_cast<std::size_t>(depth) < n) {
            idx = n - 1 - static_cast<std::size_t>(depth);
        }
        return buf_[idx];  // oldest entry during warm-up
    }

    std::size_t size() const { return buf_.size(); }
    bool empty() const { return buf_.empty(); }

  private:
    int max_depth_;
    std::deque<Payload> buf_;
};

}  // namespace flowsim

#endif  // FLOWSIM_DELAY_LINE_HPP
