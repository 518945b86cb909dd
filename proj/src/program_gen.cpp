#include "cfgdw/program_gen.hpp"

#include <random>

namespace cfgdw {
namespace {

class Generator {
  public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    std::string program(int size) {
        block(std::max(size, 1), 0, false);
        return std::move(out_);
    }

  private:
    static constexpr int kMaxDepth = 8;

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    void line(int depth, const std::string& text) {
        out_.append(2 * static_cast<std::size_t>(depth), ' ');
        out_ += text;
        out_ += '\n';
    }

    std::string fresh(char prefix) { return prefix + std::to_string(counter_++); }

    // Emits statements costing exactly n.
    void block(int n, int depth, bool in_loop) {
        while (n > 0) {
            int kind = n >= 2 && depth < kMaxDepth ? static_cast<int>(below(100)) : 0;
            if (kind < 50) {
                line(depth, fresh('s') + ";");
                n -= 1;
            } else if (kind < 72) {
                int inner = 1 + static_cast<int>(below(static_cast<std::uint64_t>(n - 1)));
                if_statement(inner, depth, in_loop);
                n -= 1 + inner;
            } else if (kind < 90) {
                int inner = 1 + static_cast<int>(below(static_cast<std::uint64_t>(n - 1)));
                while_statement(inner, depth);
                n -= 1 + inner;
            } else {
                int inner = 1 + static_cast<int>(below(static_cast<std::uint64_t>(n - 1)));
                line(depth, "do {");
                block(inner, depth + 1, true);
                line(depth, "} while " + fresh('c') + ";");
                n -= 1 + inner;
            }
        }
    }

    // Jumps only end a then-branch, so every if keeps a fall-through path.
    void if_statement(int inner, int depth, bool in_loop) {
        line(depth, "if " + fresh('c') + " {");
        bool jump = below(4) == 0;
        int then_size = inner;
        int else_size = 0;
        if (inner >= 2 && below(2) == 0) {
            then_size = 1 + static_cast<int>(below(static_cast<std::uint64_t>(inner - 1)));
            else_size = inner - then_size;
        }
        if (jump && then_size >= 1) {
            if (then_size > 1) block(then_size - 1, depth + 1, in_loop);
            std::uint64_t pick = below(in_loop ? 3 : 1);
            line(depth + 1, !in_loop || pick == 0 ? "return;" : pick == 1 ? "break;" : "continue;");
        } else {
            block(then_size, depth + 1, in_loop);
        }
        if (else_size > 0) {
            line(depth, "} else {");
            block(else_size, depth + 1, in_loop);
        }
        line(depth, "}");
    }

    void while_statement(int inner, int depth) {
        // A constant-true loop always gets a guarded break as its first statement.
        if (inner >= 3 && below(5) == 0) {
            line(depth, "while 1 {");
            line(depth + 1, "if " + fresh('c') + " {");
            line(depth + 2, "break;");
            line(depth + 1, "}");
            block(inner - 2, depth + 1, true);
        } else {
            line(depth, "while " + fresh('c') + " {");
            block(inner, depth + 1, true);
        }
        line(depth, "}");
    }

    std::mt19937_64 rng_;
    std::string out_;
    int counter_ = 0;
};

} // namespace

std::string generate_random_program(std::uint64_t seed, int size) { return Generator(seed).program(size); }

} // namespace cfgdw
