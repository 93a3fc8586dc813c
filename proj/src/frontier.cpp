#include "treasure/frontier.hpp"

#include <algorithm>
#include <stdexcept>

namespace treasure {
namespace {

// max-heap on priority, min on seq among equals
bool heap_less(const FrontierItem& a, const FrontierItem& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.seq > b.seq;
}

}  // namespace

bool Frontier::enqueue(const std::string& url, double priority) {
    if (!(priority > 0.0) || priority > 1.0)
        throw std::invalid_argument("frontier: priority must be in (0, 1]");
    if (!seen_.insert(url).second) return false;
    heap_.push_back({url, priority, next_seq_++});
    std::push_heap(heap_.begin(), heap_.end(), heap_less);
    ++insert_count_;
    if (aging_interval_ > 0 && insert_count_ % aging_interval_ == 0) apply_aging();
    return true;
}

std::optional<FrontierItem> Frontier::dequeue() {
    if (heap_.empty()) return std::nullopt;
    std::pop_heap(heap_.begin(), heap_.end(), heap_less);
    FrontierItem item = std::move(heap_.back());
    heap_.pop_back();
    return item;
}

void Frontier::apply_aging() {
    for (auto& item : heap_) {
        if (item.priority + aging_factor_ < 1.0) item.priority += aging_factor_;
    }
    std::make_heap(heap_.begin(), heap_.end(), heap_less);
}

}  // namespace treasure
