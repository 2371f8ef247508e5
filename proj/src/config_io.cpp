#include "cldnn/config_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace cldnn {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': expected a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "': expected an integer, got '" + value + "'");
    }
}

Vector parse_vector(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    std::vector<double> vals;
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) vals.push_back(parse_double(key, tok));
    }
    Vector v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

std::string format_vector(const Vector& v) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v(i);
    }
    return os.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "plant") config.plant = value;
            else if (key == "trajectory") config.trajectory = trajectory_from_name(value);
            else if (key == "law") config.law = control_law_from_name(value);
            else if (key == "duration") config.duration = parse_double(key, value);
            else if (key == "dt") config.dt = parse_double(key, value);
            else if (key == "t_delta") config.t_delta = parse_double(key, value);
            else if (key == "stack_capacity") config.stack_capacity = parse_int(key, value);
            else if (key == "stack_refresh") config.stack_refresh = parse_int(key, value);
            else if (key == "alpha1") config.alpha1 = parse_double(key, value);
            else if (key == "alpha2") config.alpha2 = parse_double(key, value);
            else if (key == "k1") config.k1 = parse_double(key, value);
            else if (key == "k_delta") config.k_delta = parse_double(key, value);
            else if (key == "beta") config.beta = parse_double(key, value);
            else if (key == "gamma1") config.gamma1 = parse_double(key, value);
            else if (key == "gamma2") config.gamma2 = parse_double(key, value);
            else if (key == "gamma3") config.gamma3 = parse_double(key, value);
            else if (key == "gamma0") config.gamma0 = parse_double(key, value);
            else if (key == "eig_min_gate") config.eig_min_gate = parse_double(key, value);
            else if (key == "eig_max_gate") config.eig_max_gate = parse_double(key, value);
            else if (key == "hidden_layers") config.hidden_layers = parse_int(key, value);
            else if (key == "neurons") config.neurons = parse_int(key, value);
            else if (key == "activation") config.activation = activation_from_name(value);
            else if (key == "seed") config.seed = static_cast<unsigned>(parse_int(key, value));
            else if (key == "q0") config.q0 = parse_vector(key, value);
            else if (key == "qdot0") config.qdot0 = parse_vector(key, value);
            else if (key == "theta_bar") config.theta_bar = parse_double(key, value);
            else if (key == "lambda_e") config.lambda_e = parse_double(key, value);
            else if (key == "delta_acc") config.delta_acc = parse_double(key, value);
            else if (key == "dither_phase") config.dither_phase = parse_double(key, value);
            else throw ConfigError("unknown field '" + key + "'");
        } catch (const std::invalid_argument& err) {
            throw ConfigError("field '" + key + "': " + err.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& config) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "# closed-loop experiment configuration\n"
       << "plant = " << config.plant << '\n'
       << "trajectory = " << trajectory_name(config.trajectory) << '\n'
       << "law = " << control_law_name(config.law) << '\n'
       << "duration = " << config.duration << '\n'
       << "dt = " << config.dt << '\n'
       << "t_delta = " << config.t_delta << '\n'
       << "stack_capacity = " << config.stack_capacity << '\n'
       << "stack_refresh = " << config.stack_refresh << '\n'
       << "\n# gains\n"
       << "alpha1 = " << config.alpha1 << '\n'
       << "alpha2 = " << config.alpha2 << '\n'
       << "k1 = " << config.k1 << '\n'
       << "k_delta = " << config.k_delta << '\n'
       << "beta = " << config.beta << '\n'
       << "gamma1 = " << config.gamma1 << '\n'
       << "gamma2 = " << config.gamma2 << '\n'
       << "gamma3 = " << config.gamma3 << '\n'
       << "gamma0 = " << config.gamma0 << '\n'
       << "eig_min_gate = " << config.eig_min_gate << '\n'
       << "eig_max_gate = " << config.eig_max_gate << '\n'
       << "\n# network\n"
       << "hidden_layers = " << config.hidden_layers << '\n'
       << "neurons = " << config.neurons << '\n'
       << "activation = " << activation_name(config.activation) << '\n'
       << "seed = " << config.seed << '\n'
       << "\n# initial state and bounds\n"
       << "q0 = " << format_vector(config.q0) << '\n'
       << "qdot0 = " << format_vector(config.qdot0) << '\n'
       << "theta_bar = " << config.theta_bar << '\n'
       << "lambda_e = " << config.lambda_e << '\n'
       << "delta_acc = " << config.delta_acc << '\n'
       << "dither_phase = " << config.dither_phase << '\n';
    return os.str();
}

}  // namespace cldnn
