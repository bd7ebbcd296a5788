// Command-line front end: sequence generation, reversal derivation,
// verification sweeps, fixed-point map orbits, and the bidirectional
// Langevin demonstration. Exit codes: 0 pass, 1 property failure,
// 2 usage or validation error.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revgen/reference.hpp"
#include "revgen/revgen.hpp"

using nlohmann::ordered_json;

namespace {

// Shortest decimal that parses back to the same double.
std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::uint64_t parse_word(const std::string& text) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw std::invalid_argument("not an unsigned integer: '" + text + "'");
    }
    return value;
}

struct GeneratorOptions {
    std::uint64_t a = 1029;
    std::uint64_t c = 1731;
    std::uint64_t b = 507;
    unsigned k = 11;
    std::string seed = "0,0";
};

void add_generator_options(CLI::App* cmd, GeneratorOptions& opt, bool with_seed) {
    cmd->add_option("--a", opt.a, "multiplier (odd)")->capture_default_str();
    cmd->add_option("--c", opt.c, "increment")->capture_default_str();
    cmd->add_option("--b", opt.b, "extra x coefficient in the y update")->capture_default_str();
    cmd->add_option("--k", opt.k, "word width in bits; modulus 2^k")->capture_default_str();
    if (with_seed) {
        cmd->add_option("--seed", opt.seed, "start state as x,y")
            ->envname("REVGEN_SEED")
            ->capture_default_str();
    }
}

revgen::CoupledGenerator make_generator(const GeneratorOptions& opt) {
    const revgen::CoupledGenerator gen{opt.a, opt.c, opt.b, opt.k};
    gen.validate();
    return gen;
}

revgen::CoupledState parse_state(const std::string& text, const revgen::CoupledGenerator& gen) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("seed must be given as 'x,y'");
    }
    const std::uint64_t x = parse_word(text.substr(0, comma));
    const std::uint64_t y = parse_word(text.substr(comma + 1));
    if (x > gen.mask() || y > gen.mask()) {
        throw std::invalid_argument("seed words must be < 2^k");
    }
    return revgen::CoupledState{x, y};
}

// Binds the row stream to a file when --out is given, stdout otherwise.
class OutputTarget {
  public:
    std::ostream& open(const std::string& path) {
        if (path.empty()) {
            return std::cout;
        }
        file_.open(path, std::ios::binary);
        if (!file_) {
            throw std::invalid_argument("cannot open output file: " + path);
        }
        return file_;
    }

  private:
    std::ofstream file_;
};

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    GeneratorOptions gen;
    std::uint64_t n = 10;
    std::string direction = "forward";
    std::string format = "csv";
    std::string out;
};

int run_generate(const GenerateArgs& args) {
    const revgen::CoupledGenerator gen = make_generator(args.gen);
    revgen::CoupledState s = parse_state(args.gen.seed, gen);

    struct Row {
        std::uint64_t index;
        revgen::CoupledState state;
        double uniform;
    };
    std::vector<Row> rows;
    rows.reserve(args.n);
    if (args.direction == "forward") {
        for (std::uint64_t i = 1; i <= args.n; ++i) {
            s = gen.step_forward(s);
            rows.push_back({i, s, gen.output(s)});
        }
    } else {
        const revgen::ReversedCoupledGenerator rev = revgen::reverse_coupled(gen);
        for (std::uint64_t i = 1; i <= args.n; ++i) {
            s = rev.step_backward(s);
            rows.push_back({i, s, gen.output(s)});
        }
    }

    OutputTarget target;
    std::ostream& os = target.open(args.out);
    if (args.format == "csv") {
        os << "index,x,y,uniform\n";
        for (const Row& row : rows) {
            os << row.index << ',' << row.state.x << ',' << row.state.y << ','
               << format_double(row.uniform) << '\n';
        }
    } else {
        ordered_json arr = ordered_json::array();
        for (const Row& row : rows) {
            arr.push_back({{"index", row.index},
                           {"x", row.state.x},
                           {"y", row.state.y},
                           {"uniform", row.uniform}});
        }
        os << arr.dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------- reverse-derive

struct ReverseDeriveArgs {
    GeneratorOptions gen;
    bool coupled = false; // set when --b was given explicitly
    std::string out;
};

int run_reverse_derive(const ReverseDeriveArgs& args) {
    OutputTarget target;
    std::ostream& os = target.open(args.out);
    if (args.coupled) {
        const revgen::ReversedCoupledGenerator rev =
            revgen::reverse_coupled(make_generator(args.gen));
        const ordered_json doc{{"a_inverse", rev.inverse_multiplier},
                               {"c_reverse", rev.reverse_increment},
                               {"a", rev.multiplier},
                               {"c", rev.increment},
                               {"e", rev.effective_coupling},
                               {"k", rev.word_bits}};
        os << doc.dump(2) << '\n';
    } else {
        const revgen::AffineGenerator fwd{args.gen.a, args.gen.c, args.gen.k};
        const revgen::AffineGenerator rev = revgen::reverse_affine(fwd);
        const ordered_json doc{{"a", rev.multiplier}, {"c", rev.increment}, {"k", rev.word_bits}};
        os << doc.dump(2) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------ verify-period

int run_verify_period(const GeneratorOptions& opt) {
    const revgen::CoupledGenerator gen = make_generator(opt);
    const revgen::CoupledState seed = parse_state(opt.seed, gen);
    const revgen::PeriodReport report = revgen::verify_period(gen, seed);
    const ordered_json doc{{"claimed_period", report.claimed_period},
                           {"observed_period", report.observed_period},
                           {"all_states_visited", report.all_states_visited},
                           {"distinct_count", report.distinct_count},
                           {"full_period", report.full_period()}};
    std::cout << doc.dump(2) << '\n';
    return report.full_period() ? 0 : 1;
}

// -------------------------------------------------------- verify-palindrome

int run_verify_palindrome(const GeneratorOptions& opt, std::uint64_t n) {
    const revgen::CoupledGenerator gen = make_generator(opt);
    const revgen::CoupledState seed = parse_state(opt.seed, gen);
    if (n == 0) {
        n = gen.modulus() * gen.modulus();
    }

    if (n == gen.modulus() * gen.modulus()) {
        const revgen::PalindromeReport report = revgen::verify_palindrome(gen, seed, n);
        ordered_json doc{{"mode", "palindrome"}, {"n", n}, {"matched", report.matched}};
        if (report.matched) {
            doc["first_mismatch"] = nullptr;
        } else {
            doc["first_mismatch"] = report.first_mismatch;
        }
        std::cout << doc.dump(2) << '\n';
        return report.matched ? 0 : 1;
    }

    const bool ok = revgen::verify_roundtrip(gen, seed, n);
    const ordered_json doc{{"mode", "roundtrip"}, {"n", n}, {"matched", ok}};
    std::cout << doc.dump(2) << '\n';
    return ok ? 0 : 1;
}

// --------------------------------------------------------------- map-orbit

struct MapOrbitArgs {
    std::string map = "QPQ";
    std::int64_t shear_q = 1;
    std::int64_t shear_p = 1;
    unsigned frac_bits = revgen::maps::kDefaultFracBits;
    double q0 = 0.25;
    double p0 = 0.5;
    std::uint64_t steps = 10;
    std::string out;
};

std::uint64_t to_fixed_fraction(double value, unsigned frac_bits) {
    const double scaled = std::ldexp(value, static_cast<int>(frac_bits));
    if (!std::isfinite(scaled) || std::abs(scaled) >= 9.2e18) {
        throw std::invalid_argument("coordinate does not fit the fixed-point grid");
    }
    return static_cast<std::uint64_t>(std::llrint(scaled)) & revgen::low_mask(frac_bits);
}

int run_map_orbit(const MapOrbitArgs& args) {
    revgen::maps::validate_frac_bits(args.frac_bits);
    std::vector<revgen::maps::ReversibleMap> parts;
    for (const char ch : args.map) {
        switch (ch) {
        case 'Q':
            parts.push_back({revgen::maps::ShearQ{args.shear_q}});
            break;
        case 'P':
            parts.push_back({revgen::maps::ShearP{args.shear_p}});
            break;
        case 'R':
            parts.push_back({revgen::maps::Exchange{}});
            break;
        default:
            throw std::invalid_argument("map letters must be Q, P, or R");
        }
    }
    if (parts.empty()) {
        throw std::invalid_argument("map string must be nonempty");
    }
    const revgen::maps::ReversibleMap map{revgen::maps::Composite{std::move(parts)}};

    revgen::maps::PhasePoint pt{to_fixed_fraction(args.q0, args.frac_bits),
                                to_fixed_fraction(args.p0, args.frac_bits)};
    const std::uint64_t denominator = revgen::pow2(args.frac_bits);
    const double inv_den = std::ldexp(1.0, -static_cast<int>(args.frac_bits));

    OutputTarget target;
    std::ostream& os = target.open(args.out);
    os << "step,q,p,q_decimal,p_decimal\n";
    for (std::uint64_t i = 1; i <= args.steps; ++i) {
        pt = revgen::maps::apply(map, pt, args.frac_bits);
        os << i << ',' << pt.q << '/' << denominator << ',' << pt.p << '/' << denominator
           << ',' << format_double(static_cast<double>(pt.q) * inv_den) << ','
           << format_double(static_cast<double>(pt.p) * inv_den) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------- langevin-replay

struct LangevinArgs {
    GeneratorOptions gen;
    double mass = 1.0;
    double tau = std::numeric_limits<double>::infinity();
    double dt = 0.01;
    std::string force = "harmonic";
    double kappa = 1.0;
    double kick_scale = 1.0;
    std::string mode = "fixed";
    unsigned frac_bits = 32;
    double q0 = 0.0;
    double q1 = 0.0;
    std::uint64_t n = 1000;
    std::string traj_out;
};

void write_trajectory(const std::string& path,
                      const std::vector<revgen::langevin::TrajectorySample>& samples) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    os << "step,q,uniforms_consumed\n";
    for (const revgen::langevin::TrajectorySample& s : samples) {
        os << s.step << ',' << format_double(s.q) << ',' << s.uniforms_consumed << '\n';
    }
}

int run_langevin_replay(const LangevinArgs& args) {
    revgen::langevin::LangevinConfig cfg;
    cfg.mass = args.mass;
    cfg.tau = args.tau;
    cfg.dt = args.dt;
    cfg.kick_scale = args.kick_scale;
    if (args.force == "zero") {
        cfg.force = revgen::langevin::ZeroForce{};
    } else {
        cfg.force = revgen::langevin::HarmonicForce{args.kappa};
    }
    if (args.mode == "fixed") {
        cfg.mode = revgen::langevin::FixedPointMode{args.frac_bits};
    } else {
        cfg.mode = revgen::langevin::FloatMode{};
    }
    cfg.noise = make_generator(args.gen);
    cfg.validate();
    const revgen::CoupledState seed = parse_state(args.gen.seed, cfg.noise);

    std::vector<revgen::langevin::TrajectorySample> forward;
    std::vector<revgen::langevin::TrajectorySample> backward;
    const bool want_logs = !args.traj_out.empty();
    const revgen::langevin::ReplayReport report = revgen::langevin::run_bidirectional(
        cfg, args.q0, args.q1, seed, args.n, want_logs ? &forward : nullptr,
        want_logs ? &backward : nullptr);

    if (want_logs) {
        write_trajectory(args.traj_out + ".forward.csv", forward);
        write_trajectory(args.traj_out + ".backward.csv", backward);
    }

    const ordered_json doc{{"steps", report.steps},
                           {"max_position_deviation", report.max_position_deviation},
                           {"rng_state_restored", report.rng_state_restored},
                           {"bit_exact", report.bit_exact}};
    std::cout << doc.dump(2) << '\n';

    const bool pass = report.rng_state_restored && (!cfg.fixed_point() || report.bit_exact);
    return pass ? 0 : 1;
}

// -------------------------------------------------------------- conformance

int run_conformance(const GeneratorOptions& opt, std::uint64_t n) {
    const revgen::CoupledGenerator gen = make_generator(opt);
    if (!(gen == revgen::rund_generator())) {
        throw std::invalid_argument(
            "conformance runs the classic constants a=1029 c=1731 b=507 k=11 only");
    }

    const auto report_mismatch = [&](const char* direction, std::uint64_t index) {
        const ordered_json doc{
            {"checked", n}, {"matched", false}, {"direction", direction}, {"first_mismatch", index}};
        std::cout << doc.dump(2) << '\n';
        std::cerr << "conformance: first mismatch in " << direction << " step " << index << '\n';
        return 1;
    };

    std::int64_t intx = 0;
    std::int64_t inty = 0;
    revgen::CoupledState s{0, 0};
    for (std::uint64_t i = 1; i <= n; ++i) {
        const double expected = revgen::reference::rund(intx, inty);
        s = gen.step_forward(s);
        if (s.x != static_cast<std::uint64_t>(intx) || s.y != static_cast<std::uint64_t>(inty) ||
            gen.output(s) != expected) {
            return report_mismatch("forward", i);
        }
    }

    const revgen::ReversedCoupledGenerator rev = revgen::reverse_coupled(gen);
    intx = 0;
    inty = 0;
    s = revgen::CoupledState{0, 0};
    for (std::uint64_t i = 1; i <= n; ++i) {
        revgen::reference::rund_reverse(intx, inty);
        s = rev.step_backward(s);
        if (s.x != static_cast<std::uint64_t>(intx) || s.y != static_cast<std::uint64_t>(inty)) {
            return report_mismatch("backward", i);
        }
    }

    const ordered_json doc{{"checked", n}, {"matched", true}};
    std::cout << doc.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-reversible pseudorandom generators and reversible dynamics"};
    app.require_subcommand(1);
    int exit_code = 0;

    GenerateArgs gen_args;
    CLI::App* generate = app.add_subcommand("generate", "emit a forward or backward sequence");
    add_generator_options(generate, gen_args.gen, true);
    generate->add_option("--n", gen_args.n, "number of steps")->capture_default_str();
    generate->add_option("--dir", gen_args.direction, "walk direction")
        ->check(CLI::IsMember({"forward", "backward"}))
        ->capture_default_str();
    generate->add_option("--format", gen_args.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    generate->add_option("--out", gen_args.out, "output file (default stdout)");
    generate->callback([&] { exit_code = run_generate(gen_args); });

    ReverseDeriveArgs rd_args;
    CLI::App* derive =
        app.add_subcommand("reverse-derive", "derive the generator that steps backward");
    derive->add_option("--a", rd_args.gen.a, "multiplier (odd)")->capture_default_str();
    derive->add_option("--c", rd_args.gen.c, "increment")->capture_default_str();
    CLI::Option* b_opt =
        derive->add_option("--b", rd_args.gen.b, "y-update shear; makes the derivation coupled");
    derive->add_option("--k", rd_args.gen.k, "word width in bits")->capture_default_str();
    derive->add_option("--out", rd_args.out, "output file (default stdout)");
    derive->callback([&] {
        rd_args.coupled = b_opt->count() > 0;
        exit_code = run_reverse_derive(rd_args);
    });

    GeneratorOptions period_args;
    CLI::App* period = app.add_subcommand("verify-period", "exhaustive orbit and state sweep");
    add_generator_options(period, period_args, true);
    period->callback([&] { exit_code = run_verify_period(period_args); });

    GeneratorOptions pal_args;
    std::uint64_t pal_n = 0;
    CLI::App* palindrome = app.add_subcommand(
        "verify-palindrome", "forward/backward palindrome identity over a full period, or a "
                             "round-trip spot check for other step counts");
    add_generator_options(palindrome, pal_args, true);
    palindrome->add_option("--n", pal_n, "step count; 0 means the full period 2^(2k)")
        ->capture_default_str();
    palindrome->callback([&] { exit_code = run_verify_palindrome(pal_args, pal_n); });

    MapOrbitArgs orbit_args;
    CLI::App* orbit = app.add_subcommand("map-orbit", "iterate a shear/reflection composite");
    orbit->add_option("--map", orbit_args.map, "letters Q (shear q), P (shear p), R (exchange)")
        ->capture_default_str();
    orbit->add_option("--shear-q", orbit_args.shear_q, "integer coefficient for Q")
        ->capture_default_str();
    orbit->add_option("--shear-p", orbit_args.shear_p, "integer coefficient for P")
        ->capture_default_str();
    orbit->add_option("--frac-bits", orbit_args.frac_bits, "fractional bits F")
        ->capture_default_str();
    orbit->add_option("--q0", orbit_args.q0, "initial q, taken mod 1")->capture_default_str();
    orbit->add_option("--p0", orbit_args.p0, "initial p, taken mod 1")->capture_default_str();
    orbit->add_option("--steps", orbit_args.steps, "map applications")->capture_default_str();
    orbit->add_option("--out", orbit_args.out, "output file (default stdout)");
    orbit->callback([&] { exit_code = run_map_orbit(orbit_args); });

    LangevinArgs lv_args;
    CLI::App* langevin =
        app.add_subcommand("langevin-replay", "run n steps forward then backward and report");
    add_generator_options(langevin, lv_args.gen, true);
    langevin->add_option("--mass", lv_args.mass, "particle mass")->capture_default_str();
    langevin->add_option("--tau", lv_args.tau, "drag time constant; inf disables drag")
        ->capture_default_str();
    langevin->add_option("--dt", lv_args.dt, "time step")->capture_default_str();
    langevin->add_option("--force", lv_args.force, "force model")
        ->check(CLI::IsMember({"zero", "harmonic"}))
        ->capture_default_str();
    langevin->add_option("--kappa", lv_args.kappa, "harmonic stiffness")->capture_default_str();
    langevin->add_option("--kick-scale", lv_args.kick_scale, "random kick magnitude")
        ->capture_default_str();
    langevin->add_option("--mode", lv_args.mode, "arithmetic mode")
        ->check(CLI::IsMember({"fixed", "float"}))
        ->capture_default_str();
    langevin->add_option("--frac-bits", lv_args.frac_bits, "grid bits in fixed mode")
        ->capture_default_str();
    langevin->add_option("--q0", lv_args.q0, "position at t - dt")->capture_default_str();
    langevin->add_option("--q1", lv_args.q1, "position at t")->capture_default_str();
    langevin->add_option("--n", lv_args.n, "steps in each direction")->capture_default_str();
    langevin->add_option("--traj-out", lv_args.traj_out,
                         "prefix for <prefix>.forward.csv and <prefix>.backward.csv");
    langevin->callback([&] { exit_code = run_langevin_replay(lv_args); });

    GeneratorOptions conf_args;
    std::uint64_t conf_n = 4194304;
    CLI::App* conformance = app.add_subcommand(
        "conformance", "step a literal transcription of the classic routines against the library");
    add_generator_options(conformance, conf_args, false);
    conformance->add_option("--n", conf_n, "steps in each direction")->capture_default_str();
    conformance->callback([&] { exit_code = run_conformance(conf_args, conf_n); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // help request vs genuine usage error
    } catch (const revgen::PeriodMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const revgen::CycleNotFound& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const revgen::ResourceLimit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
