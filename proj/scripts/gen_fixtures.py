#!/usr/bin/env python3
"""Regenerates the synthetic fixture curves and system configs under data/.

The curves are analytic shapes pinned to the anchor values listed in
data/curves/README.md; everything between anchors is smooth interpolation,
not measurement. Committed output is deterministic, so re-running this
script must produce byte-identical files.
"""

import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")
CURVES = os.path.join(DATA, "curves")
SYSTEMS = os.path.join(DATA, "systems")


def grid(lo, hi, step=5):
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


def write_curve(name, wavelengths, fn):
    path = os.path.join(CURVES, name)
    with open(path, "w", newline="\n") as f:
        f.write("wavelength_nm,value_db\n")
        for lam in wavelengths:
            f.write("%g,%.6f\n" % (lam, fn(lam)))
    print("wrote", path)


def gauss(lam, center, sigma):
    return math.exp(-(((lam - center) / sigma) ** 2))


def sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def below(lam, knee, scale):
    """Quadratic loss rise below a knee wavelength."""
    return max(0.0, (knee - lam) / scale) ** 2


# --- Isolators (1550 nm optimized) --------------------------------------

def iso1_forward(lam):
    return -0.5 - 2.5 * below(lam, 1400, 400)

def iso1_reverse(lam):
    return -17.0 - 30.0 * gauss(lam, 1550, 45) - 7.0 * ((lam - 1295) / 355) ** 2

def iso2_forward(lam):
    return -0.55 - 2.2 * below(lam, 1400, 400)

def iso2_reverse(lam):
    return -16.0 - 26.0 * gauss(lam, 1550, 55) - 5.0 * ((lam - 1280) / 400) ** 2

def iso3_forward(lam):
    return -0.6 - 2.8 * gauss(lam, 1260, 160)

def iso3_reverse(lam):
    return -30.0 + 17.0 * gauss(lam, 1400, 75) - 5.3 * gauss(lam, 1550, 70)


# --- Circulator ----------------------------------------------------------

def circ_12(lam):
    return -1.9 - 3.4 * below(lam, 1430, 430)

def circ_23(lam):
    return -2.7 - 3.8 * below(lam, 1430, 430)

def circ_21(lam):
    return -22.0 - 30.0 * gauss(lam, 1565, 70) - 16.0 * ((lam - 1275) / 430) ** 2

def circ_32(lam):
    return -23.0 - 28.0 * gauss(lam, 1570, 75) - 15.0 * ((lam - 1280) / 430) ** 2

def circ_13(lam):
    return -55.0 + 15.0 * gauss(lam, 1575, 120)

def circ_31(lam):
    return -56.0 + 14.0 * gauss(lam, 1560, 110)


# --- Broadband source + raw trace for the normalization example ----------

def supercontinuum(lam):
    return -12.0 - 3.0 * gauss(lam, 1400, 30) - 2.0 * ((lam - 1350) / 400) ** 2

def raw_iso1_reverse(lam):
    return supercontinuum(lam) + iso1_reverse(lam)


# --- Receiver internals ---------------------------------------------------

def bob_assembly(lam):
    return -13.0 - 2.5 * ((lam - 1540) / 300) ** 2

def bob_pm(lam):
    return -8.0 - 2.0 * ((lam - 1550) / 400) ** 2


# --- Detectors ------------------------------------------------------------

def spad_efficiency_log10(lam):
    base = -0.85 - 0.15 * ((lam - 1310) / 240) ** 2
    cutoff = 3.10 * sigmoid((lam - 1663.7) / 14.87)
    return base - cutoff

def monitor_responsivity_log10(lam):
    return -0.07 - 5.5 * sigmoid((lam - 1665) / 15)


# --- Standard single-mode fiber attenuation (dB/km) -----------------------

def smf_attenuation(lam):
    return (-0.19 - 1.1 * below(lam, 1550, 550) - 0.45 * gauss(lam, 1385, 15)
            - 0.6 * max(0.0, (lam - 1550) / 250) ** 2)


def write_json(name, doc):
    path = os.path.join(SYSTEMS, name)
    with open(path, "w", newline="\n") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print("wrote", path)


def main():
    os.makedirs(CURVES, exist_ok=True)
    os.makedirs(SYSTEMS, exist_ok=True)

    comp_grid = grid(1000, 1750)
    wide_grid = grid(1000, 1800)

    write_curve("iso1_forward.csv", comp_grid, iso1_forward)
    write_curve("iso1_reverse.csv", comp_grid, iso1_reverse)
    write_curve("iso2_forward.csv", comp_grid, iso2_forward)
    write_curve("iso2_reverse.csv", comp_grid, iso2_reverse)
    write_curve("iso3_forward.csv", comp_grid, iso3_forward)
    write_curve("iso3_reverse.csv", comp_grid, iso3_reverse)
    write_curve("circulator_1_2.csv", comp_grid, circ_12)
    write_curve("circulator_2_3.csv", comp_grid, circ_23)
    write_curve("circulator_2_1.csv", comp_grid, circ_21)
    write_curve("circulator_3_2.csv", comp_grid, circ_32)
    write_curve("circulator_1_3.csv", comp_grid, circ_13)
    write_curve("circulator_3_1.csv", comp_grid, circ_31)
    write_curve("supercontinuum.csv", comp_grid, supercontinuum)
    write_curve("raw_iso1_reverse.csv", comp_grid, raw_iso1_reverse)
    write_curve("bob_assembly.csv", wide_grid, bob_assembly)
    write_curve("bob_pm.csv", wide_grid, bob_pm)
    write_curve("spad_efficiency_log10.csv", wide_grid, spad_efficiency_log10)
    write_curve("monitor_responsivity_log10.csv", wide_grid, monitor_responsivity_log10)
    write_curve("smf_attenuation_per_km.csv", wide_grid, smf_attenuation)

    # Transmitter protected by an isolator only. The probe enters against the
    # isolator's forward direction, so the inward pass is 'reverse'.
    alice_components = [
        {"id": "conn_in", "kind": "connector", "reflectivity_db": -50.0, "insertion_db": -0.3},
        {"id": "iso1", "kind": "isolator",
         "forward_csv": "iso1_forward.csv", "reverse_csv": "iso1_reverse.csv"},
        {"id": "tap_coupler", "kind": "coupler",
         "tap_ratio_db": -10.0, "through_ratio_db": -0.458, "excess_loss_db": -0.04},
        {"id": "open_port", "kind": "connector", "reflectivity_db": -14.0, "insertion_db": -0.3},
    ]
    alice_path = [
        {"id": "conn_in", "direction": "forward"},
        {"id": "iso1", "direction": "reverse"},
        {"id": "tap_coupler", "direction": "forward"},
        {"id": "open_port", "direction": "forward"},
    ]
    write_json("alice_iso1.json", {
        "name": "alice_iso1",
        "curves_dir": "../curves",
        "components": alice_components,
        "path": alice_path,
        "reflection_site": 3,
        "damage_threshold_photons": 1e13,
    })

    # Same transmitter with a narrow bandpass filter added behind the
    # entrance connector.
    filtered_components = alice_components[:1] + [
        {"id": "fbg_filter", "kind": "filter", "center_nm": 1550.0, "passband_fwhm_nm": 4.0,
         "passband_loss_db": -1.0, "stopband_suppression_db": -60.0},
    ] + alice_components[1:]
    filtered_path = alice_path[:1] + [{"id": "fbg_filter", "direction": "forward"}] + alice_path[1:]
    write_json("alice_iso1_filtered.json", {
        "name": "alice_iso1_filtered",
        "curves_dir": "../curves",
        "components": filtered_components,
        "path": filtered_path,
        "reflection_site": 4,
        "damage_threshold_photons": 1e13,
    })

    # Transmitter with an entrance tap coupler feeding a classical monitoring
    # detector, in addition to the isolator.
    write_json("alice_iso1_monitored.json", {
        "name": "alice_iso1_monitored",
        "curves_dir": "../curves",
        "components": [
            {"id": "tap_coupler", "kind": "coupler",
             "tap_ratio_db": -10.0, "through_ratio_db": -0.458, "excess_loss_db": -0.04},
            {"id": "conn_a", "kind": "connector", "reflectivity_db": -50.0, "insertion_db": -0.3},
            {"id": "iso1", "kind": "isolator",
             "forward_csv": "iso1_forward.csv", "reverse_csv": "iso1_reverse.csv"},
            {"id": "open_port", "kind": "connector", "reflectivity_db": -14.0,
             "insertion_db": -0.3},
        ],
        "path": [
            {"id": "tap_coupler", "direction": "forward"},
            {"id": "conn_a", "direction": "forward"},
            {"id": "iso1", "direction": "reverse"},
            {"id": "open_port", "direction": "forward"},
        ],
        "reflection_site": 3,
        "monitoring": {
            "tap_point": 0,
            "responsivity_log10_csv": "monitor_responsivity_log10.csv",
            "dark_current_a": 1e-8,
            "alarm_factor": 1.0,
        },
        "damage_threshold_photons": 1e13,
    })

    # Receiver: lossy free-space assembly and phase modulator, gated SPAD
    # pair behind the full chain, probe reflecting off the modulator's output
    # connector (port 6). Round trip lands at -57 dB at 1550 nm.
    def bob_doc(name, port6_reflectivity_db):
        return {
            "name": name,
            "curves_dir": "../curves",
            "components": [
                {"id": "conn_in", "kind": "connector", "reflectivity_db": -45.0,
                 "insertion_db": -0.5},
                {"id": "assembly", "kind": "loss", "loss_csv": "bob_assembly.csv"},
                {"id": "pm", "kind": "loss", "loss_csv": "bob_pm.csv"},
                {"id": "conn_port6", "kind": "connector",
                 "reflectivity_db": port6_reflectivity_db, "insertion_db": -0.3},
            ],
            "path": [
                {"id": "conn_in", "direction": "forward"},
                {"id": "assembly", "direction": "forward"},
                {"id": "pm", "direction": "forward"},
                {"id": "conn_port6", "direction": "forward"},
            ],
            "reflection_site": 3,
            "spads": [
                {"efficiency_log10_csv": "spad_efficiency_log10.csv",
                 "dark_count_prob": 1e-4, "gate_fwhm_s": 2.5e-9, "gate_rate_hz": 98000.0,
                 "afterpulse_amplitude": 0.01, "trap_decay_s": 1e-5},
                {"efficiency_log10_csv": "spad_efficiency_log10.csv",
                 "dark_count_prob": 1.2e-4, "gate_fwhm_s": 2.5e-9, "gate_rate_hz": 98000.0,
                 "afterpulse_amplitude": 0.01, "trap_decay_s": 1e-5},
            ],
            "signal_click_prob": 0.05,
            "damage_threshold_photons": 1e13,
            "protocol": {"q0": 0.01, "y0": 0.70, "q_abort": 0.11, "delta_y_max": 0.15},
        }

    # Open port 6: strong glass-air reflection. Mated port 6: the residual
    # back-reflection is 8 dB weaker, matching the observed rise when the
    # connector is opened.
    write_json("bob.json", bob_doc("bob", -14.0))
    write_json("bob_port6_closed.json", bob_doc("bob_port6_closed", -22.0))


if __name__ == "__main__":
    main()
