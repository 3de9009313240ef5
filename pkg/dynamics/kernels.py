"""
dynamics/kernels.py

Compiled inner loops shared by both vehicle models: rigid-body accelerations,
the two-step (semi-implicit) Euler update, vehicle force models and horizon
rollouts. Kernels work on flat float64 arrays and never raise; they return a
status code that the Python wrappers turn into exceptions.

State layout: [x, y, z, u, v, w, roll, pitch, yaw, p, q, r].
"""

import math

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_NONFINITE = 2
STATUS_LOW_AIRSPEED = 3

PITCH_LIMIT = 0.5 * math.pi - 0.01
TWO_PI = 2.0 * math.pi

# -----------------------------
# Multi-rotor parameter vector layout
# -----------------------------
MR_MASS, MR_IXX, MR_IYY, MR_IZZ = 0, 1, 2, 3
MR_ARM, MR_TMAX, MR_KQ = 4, 5, 6
MR_CDX, MR_CDY, MR_CDZ = 7, 8, 9
MR_CAX, MR_CAY, MR_CAZ = 10, 11, 12
MR_GRAVITY, MR_TLAG = 13, 14
MR_SIZE = 15

# -----------------------------
# Fixed-wing parameter vector layout
# -----------------------------
FW_MASS, FW_IXX, FW_IYY, FW_IZZ = 0, 1, 2, 3
FW_AREA, FW_CHORD, FW_SPAN, FW_RHO = 4, 5, 6, 7
FW_CL0, FW_CLA, FW_CD0, FW_K, FW_CYB = 8, 9, 10, 11, 12
FW_CLB, FW_CLP = 13, 14
FW_CM0, FW_CMA, FW_CMQ = 15, 16, 17
FW_CNB, FW_CNR = 18, 19
FW_E_AIL, FW_E_ELEV, FW_E_TLA, FW_E_RUD = 20, 21, 22, 23
FW_TMAX, FW_GRAVITY, FW_MIN_AIRSPEED = 24, 25, 26
FW_SIZE = 27


@njit(cache=True)
def wrap(angle):
    return angle - TWO_PI * math.floor((angle + math.pi) / TWO_PI)


@njit(cache=True)
def gravity_body(x, mass, g, out):
    """Weight expressed in body axes."""
    phi, theta = x[6], x[7]
    out[0] = -mass * g * math.sin(theta)
    out[1] = mass * g * math.sin(phi) * math.cos(theta)
    out[2] = mass * g * math.cos(phi) * math.cos(theta)


@njit(cache=True)
def rigid_body_accelerations(x, force, torque, mass, ixx, iyy, izz, out):
    """Body-frame linear and angular accelerations for a diagonal inertia."""
    u, v, w = x[3], x[4], x[5]
    p, q, r = x[9], x[10], x[11]
    out[0] = force[0] / mass - (q * w - r * v)
    out[1] = force[1] / mass - (r * u - p * w)
    out[2] = force[2] / mass - (p * v - q * u)
    out[3] = (torque[0] - (izz - iyy) * q * r) / ixx
    out[4] = (torque[1] - (ixx - izz) * r * p) / iyy
    out[5] = (torque[2] - (iyy - ixx) * p * q) / izz


@njit(cache=True)
def two_step_euler(x, accel, dt, out):
    """
    Semi-implicit Euler: velocities and rates first, then positions and
    attitude from the updated values. Returns a status code.
    """
    phi, theta, psi = x[6], x[7], x[8]
    if abs(theta) > PITCH_LIMIT:
        return STATUS_SINGULAR

    for i in range(3):
        out[3 + i] = x[3 + i] + dt * accel[i]
        out[9 + i] = x[9 + i] + dt * accel[3 + i]
    u, v, w = out[3], out[4], out[5]
    p, q, r = out[9], out[10], out[11]

    cphi, sphi = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cpsi, spsi = math.cos(psi), math.sin(psi)

    # body -> NED, Z-Y-X
    out[0] = x[0] + dt * (cth * cpsi * u + (sphi * sth * cpsi - cphi * spsi) * v
                          + (cphi * sth * cpsi + sphi * spsi) * w)
    out[1] = x[1] + dt * (cth * spsi * u + (sphi * sth * spsi + cphi * cpsi) * v
                          + (cphi * sth * spsi - sphi * cpsi) * w)
    out[2] = x[2] + dt * (-sth * u + sphi * cth * v + cphi * cth * w)

    coupled = q * sphi + r * cphi
    out[6] = wrap(phi + dt * (p + coupled * sth / cth))
    out[7] = theta + dt * (q * cphi - r * sphi)
    out[8] = wrap(psi + dt * coupled / cth)

    for i in range(12):
        if not math.isfinite(out[i]):
            return STATUS_NONFINITE
    if abs(out[7]) > PITCH_LIMIT:
        return STATUS_SINGULAR
    return STATUS_OK


# -----------------------------
# Multi-rotor
# -----------------------------
@njit(cache=True)
def lag_filter(prev, raw, dt, t_lag, out):
    """First-order motor lag y = (1 - a) y_prev + a u with a = dt / (dt + T_lag)."""
    a = dt / (dt + t_lag)
    for i in range(4):
        out[i] = (1.0 - a) * prev[i] + a * raw[i]


@njit(cache=True)
def multirotor_wrench(x, motors, prm, force, torque):
    """
    Body-frame force and torque of an X-configuration quad-rotor.

    Motors: 0 front-right, 1 rear-left, 2 front-left, 3 rear-right; 0 and 1
    share a spin direction.
    """
    tmax = prm[MR_TMAX]
    t0 = motors[0] * tmax
    t1 = motors[1] * tmax
    t2 = motors[2] * tmax
    t3 = motors[3] * tmax
    d = prm[MR_ARM] / math.sqrt(2.0)

    gravity_body(x, prm[MR_MASS], prm[MR_GRAVITY], force)
    force[0] += -prm[MR_CDX] * x[3]
    force[1] += -prm[MR_CDY] * x[4]
    force[2] += -prm[MR_CDZ] * x[5] - (t0 + t1 + t2 + t3)

    torque[0] = d * (-t0 + t1 + t2 - t3) - prm[MR_CAX] * x[9]
    torque[1] = d * (t0 - t1 + t2 - t3) - prm[MR_CAY] * x[10]
    torque[2] = prm[MR_KQ] * (t0 + t1 - t2 - t3) - prm[MR_CAZ] * x[11]


@njit(cache=True)
def multirotor_step(x, motors, prm, dt, out):
    force = np.empty(3)
    torque = np.empty(3)
    accel = np.empty(6)
    multirotor_wrench(x, motors, prm, force, torque)
    rigid_body_accelerations(x, force, torque, prm[MR_MASS], prm[MR_IXX], prm[MR_IYY], prm[MR_IZZ], accel)
    return two_step_euler(x, accel, dt, out)


@njit(cache=True)
def multirotor_rollout(x0, controls, prm, control_dt, substeps, use_lag, motors0, states):
    """
    Zero-order-hold rollout: each control row is held for `substeps` physics
    steps. Fills `states` (N+1, 12); after a failure the remaining rows repeat
    the last valid state. Returns the status code.
    """
    dt = control_dt / substeps
    x = x0.copy()
    nxt = np.empty(12)
    motors = motors0.copy()
    filtered = np.empty(4)
    states[0, :] = x
    for k in range(controls.shape[0]):
        for _ in range(substeps):
            if use_lag:
                lag_filter(motors, controls[k], dt, prm[MR_TLAG], filtered)
                motors[:] = filtered
            else:
                motors[:] = controls[k]
            status = multirotor_step(x, motors, prm, dt, nxt)
            if status != STATUS_OK:
                for j in range(k + 1, states.shape[0]):
                    states[j, :] = x
                return status
            x[:] = nxt
        states[k + 1, :] = x
    return STATUS_OK


@njit(cache=True)
def horizon_cost(u_flat, x0, target, prm, control_dt, substeps, use_lag, motors0,
                 state_weights, control_weight):
    """
    Receding-horizon cost: sum over control steps of weighted squared state
    error against `target` rows 1..N plus control_weight * sum(u^2).
    Returns +inf if the rollout fails.
    """
    n = u_flat.shape[0] // 4
    controls = u_flat.reshape((n, 4))
    states = np.empty((n + 1, 12))
    status = multirotor_rollout(x0, controls, prm, control_dt, substeps, use_lag, motors0, states)
    if status != STATUS_OK:
        return np.inf
    cost = 0.0
    for t in range(1, n + 1):
        for k in range(12):
            if state_weights[k] != 0.0:
                diff = states[t, k] - target[t, k]
                if k == 6 or k == 8:
                    diff = wrap(diff)
                cost += state_weights[k] * diff * diff
        for i in range(4):
            cost += control_weight * controls[t - 1, i] * controls[t - 1, i]
    return cost


# -----------------------------
# Fixed-wing surrogate
# -----------------------------
@njit(cache=True)
def fixedwing_wrench(x, ctrl, prm, force, torque):
    """Body-frame force and torque of the fixed-wing surrogate. Returns a status code."""
    u, v, w = x[3], x[4], x[5]
    p, q, r = x[9], x[10], x[11]
    airspeed = math.sqrt(u * u + v * v + w * w)
    if not airspeed >= prm[FW_MIN_AIRSPEED]:
        return STATUS_LOW_AIRSPEED

    alpha = math.atan2(w, u)
    beta = math.asin(min(1.0, max(-1.0, v / airspeed)))
    qbar_s = 0.5 * prm[FW_RHO] * airspeed * airspeed * prm[FW_AREA]
    span, chord = prm[FW_SPAN], prm[FW_CHORD]

    cl = prm[FW_CL0] + prm[FW_CLA] * alpha
    cd = prm[FW_CD0] + prm[FW_K] * cl * cl
    lift = qbar_s * cl
    drag = qbar_s * cd
    side = qbar_s * prm[FW_CYB] * beta
    thrust = prm[FW_E_TLA] * ctrl[2] * prm[FW_TMAX]

    ca, sa = math.cos(alpha), math.sin(alpha)
    gravity_body(x, prm[FW_MASS], prm[FW_GRAVITY], force)
    force[0] += -drag * ca + lift * sa + thrust
    force[1] += side
    force[2] += -drag * sa - lift * ca

    torque[0] = qbar_s * span * (prm[FW_CLB] * beta + prm[FW_CLP] * p * span / (2.0 * airspeed)
                                 + prm[FW_E_AIL] * ctrl[0])
    torque[1] = qbar_s * chord * (prm[FW_CM0] + prm[FW_CMA] * alpha
                                  + prm[FW_CMQ] * q * chord / (2.0 * airspeed)
                                  + prm[FW_E_ELEV] * ctrl[1])
    torque[2] = qbar_s * span * (prm[FW_CNB] * beta + prm[FW_CNR] * r * span / (2.0 * airspeed)
                                 + prm[FW_E_RUD] * ctrl[3])
    return STATUS_OK


@njit(cache=True)
def fixedwing_accelerations(x, ctrl, prm, out):
    force = np.empty(3)
    torque = np.empty(3)
    status = fixedwing_wrench(x, ctrl, prm, force, torque)
    if status != STATUS_OK:
        return status
    rigid_body_accelerations(x, force, torque, prm[FW_MASS], prm[FW_IXX], prm[FW_IYY], prm[FW_IZZ], out)
    return STATUS_OK


@njit(cache=True)
def fixedwing_step(x, ctrl, prm, dt, out):
    accel = np.empty(6)
    status = fixedwing_accelerations(x, ctrl, prm, accel)
    if status != STATUS_OK:
        return status
    return two_step_euler(x, accel, dt, out)


@njit(cache=True)
def fixedwing_rollout(x0, controls, prm, dt, states):
    """
    One physics step per control row. Fills `states` (n+1, 12) and returns
    (status, index of the failing step or -1).
    """
    x = x0.copy()
    nxt = np.empty(12)
    states[0, :] = x
    for k in range(controls.shape[0]):
        status = fixedwing_step(x, controls[k], prm, dt, nxt)
        if status != STATUS_OK:
            for j in range(k + 1, states.shape[0]):
                states[j, :] = x
            return status, k
        x[:] = nxt
        states[k + 1, :] = x
    return STATUS_OK, -1
