#ifndef CT_ODE_HPP
#define CT_ODE_HPP

namespace ct {

// One fixed step of the Dormand-Prince 5th-order scheme.
// State needs +, scalar *, and copy; F is f(s, y) -> State.
template <class State, class F>
State dopri5_step(const F& f, double s, const State& y, double h) {
    const State k1 = f(s, y);
    const State k2 = f(s + h / 5.0, y + (h / 5.0) * k1);
    const State k3 = f(s + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const State k4 = f(s + 4.0 * h / 5.0, y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    const State k5 = f(s + 8.0 * h / 9.0,
                       y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3 -
                                212.0 / 729.0 * k4));
    const State k6 = f(s + h, y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                                       49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5));
    return y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                    2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
}

} // namespace ct

#endif
