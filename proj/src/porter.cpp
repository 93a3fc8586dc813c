#include "treasure/porter.hpp"

namespace treasure {
namespace {

// Working state for one word. Indices follow the classic formulation:
// the stem under consideration is buf[0..j], the whole word buf[0..k].
class Stemmer {
public:
    explicit Stemmer(std::string_view word) : buf_(word), k_(static_cast<int>(word.size()) - 1) {}

    std::string run() {
        if (k_ <= 1) return buf_;  // length 1-2 words are never stemmed
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        buf_.resize(static_cast<std::size_t>(k_) + 1);
        return buf_;
    }

private:
    std::string buf_;
    int k_;
    int j_ = 0;

    bool is_consonant(int i) const {
        switch (buf_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return (i == 0) ? true : !is_consonant(i - 1);
            default:
                return true;
        }
    }

    // Measure of buf[0..j]: the m in [C](VC)^m[V].
    int measure() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j_) return n;
            if (!is_consonant(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j_) return n;
                if (is_consonant(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j_) return n;
                if (!is_consonant(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!is_consonant(i)) return true;
        return false;
    }

    bool double_consonant(int i) const {
        if (i < 1) return false;
        if (buf_[static_cast<std::size_t>(i)] != buf_[static_cast<std::size_t>(i - 1)]) return false;
        return is_consonant(i);
    }

    // consonant-vowel-consonant ending at i, where the final consonant is not
    // w, x or y; restores a trailing e after e.g. hop(-ping) -> hope? no: hop.
    bool cvc(int i) const {
        if (i < 2 || !is_consonant(i) || is_consonant(i - 1) || !is_consonant(i - 2)) return false;
        char ch = buf_[static_cast<std::size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
        int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (std::string_view(buf_).substr(static_cast<std::size_t>(k_ - len + 1), static_cast<std::size_t>(len)) != s)
            return false;
        j_ = k_ - len;
        return true;
    }

    void set_to(std::string_view s) {
        buf_.replace(static_cast<std::size_t>(j_) + 1, std::string::npos, s);
        k_ = j_ + static_cast<int>(s.size());
    }

    void replace_if_m_positive(std::string_view s) {
        if (measure() > 0) set_to(s);
    }

    void step1ab() {
        if (buf_[static_cast<std::size_t>(k_)] == 's') {
            if (ends("sses")) {
                k_ -= 2;
            } else if (ends("ies")) {
                set_to("i");
            } else if (buf_[static_cast<std::size_t>(k_) - 1] != 's') {
                --k_;
            }
        }
        if (ends("eed")) {
            if (measure() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) {
                set_to("ate");
            } else if (ends("bl")) {
                set_to("ble");
            } else if (ends("iz")) {
                set_to("ize");
            } else if (double_consonant(k_)) {
                --k_;
                char ch = buf_[static_cast<std::size_t>(k_)];
                if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
            } else if (measure() == 1 && cvc(k_)) {
                set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) buf_[static_cast<std::size_t>(k_)] = 'i';
    }

    void step2() {
        if (k_ < 1) return;
        switch (buf_[static_cast<std::size_t>(k_) - 1]) {
            case 'a':
                if (ends("ational")) { replace_if_m_positive("ate"); break; }
                if (ends("tional")) { replace_if_m_positive("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_m_positive("ence"); break; }
                if (ends("anci")) { replace_if_m_positive("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_m_positive("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_m_positive("ble"); break; }
                if (ends("alli")) { replace_if_m_positive("al"); break; }
                if (ends("entli")) { replace_if_m_positive("ent"); break; }
                if (ends("eli")) { replace_if_m_positive("e"); break; }
                if (ends("ousli")) { replace_if_m_positive("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_m_positive("ize"); break; }
                if (ends("ation")) { replace_if_m_positive("ate"); break; }
                if (ends("ator")) { replace_if_m_positive("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_m_positive("al"); break; }
                if (ends("iveness")) { replace_if_m_positive("ive"); break; }
                if (ends("fulness")) { replace_if_m_positive("ful"); break; }
                if (ends("ousness")) { replace_if_m_positive("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_m_positive("al"); break; }
                if (ends("iviti")) { replace_if_m_positive("ive"); break; }
                if (ends("biliti")) { replace_if_m_positive("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_m_positive("log"); break; }
                break;
        }
    }

    void step3() {
        switch (buf_[static_cast<std::size_t>(k_)]) {
            case 'e':
                if (ends("icate")) { replace_if_m_positive("ic"); break; }
                if (ends("ative")) { replace_if_m_positive(""); break; }
                if (ends("alize")) { replace_if_m_positive("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_m_positive("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_m_positive("ic"); break; }
                if (ends("ful")) { replace_if_m_positive(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_m_positive(""); break; }
                break;
        }
    }

    void step4() {
        if (k_ < 1) return;
        switch (buf_[static_cast<std::size_t>(k_) - 1]) {
            case 'a':
                if (ends("al")) break;
                return;
            case 'c':
                if (ends("ance")) break;
                if (ends("ence")) break;
                return;
            case 'e':
                if (ends("er")) break;
                return;
            case 'i':
                if (ends("ic")) break;
                return;
            case 'l':
                if (ends("able")) break;
                if (ends("ible")) break;
                return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j_ >= 0 &&
                    (buf_[static_cast<std::size_t>(j_)] == 's' || buf_[static_cast<std::size_t>(j_)] == 't'))
                    break;
                if (ends("ou")) break;
                return;
            case 's':
                if (ends("ism")) break;
                return;
            case 't':
                if (ends("ate")) break;
                if (ends("iti")) break;
                return;
            case 'u':
                if (ends("ous")) break;
                return;
            case 'v':
                if (ends("ive")) break;
                return;
            case 'z':
                if (ends("ize")) break;
                return;
            default:
                return;
        }
        if (measure() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (buf_[static_cast<std::size_t>(k_)] == 'e') {
            int a = measure();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (buf_[static_cast<std::size_t>(k_)] == 'l' && double_consonant(k_) && measure() > 1) --k_;
    }
};

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.empty()) return {};
    return Stemmer(word).run();
}

}  // namespace treasure
