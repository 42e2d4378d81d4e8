#!/usr/bin/env python3
"""Build the bundled core-model fixtures and print reference FBA values.

Outputs:
  fixtures/e_coli_core.json      core E. coli network (95 rxns / 72 mets / 137 genes)
  fixtures/e_coli_core_xyl.json  same network extended with a xylose assimilation
                                 pathway (XYLabc / XYLI1 / XYLK) for dual-sugar runs

The reference growth rates printed at the end are computed with scipy's HiGHS
solver and are frozen into the Rust test suite. The aerobic glucose optimum of
the core network (~0.8739 1/h) is a well-known value and doubles as a
whole-network consistency check for the fixture.
"""
import json
import re
import numpy as np
from scipy.optimize import linprog

R = {}  # id -> (equation, lb, ub, gpr, objective)


def rx(rid, eq, lb, ub, gpr=""):
    R[rid] = {"eq": eq, "lb": lb, "ub": ub, "gpr": gpr}


# --- glycolysis / gluconeogenesis ---------------------------------------
rx("GLCpts", "glc__D_e + pep_c -> g6p_c + pyr_c", 0, 1000,
   "(b2417 and b1101 and b2415 and b2416) or (b1817 and b1818 and b1819 and b2415 and b2416) or (b2417 and b1621 and b2415 and b2416)")
rx("PGI", "g6p_c <=> f6p_c", -1000, 1000, "b4025")
rx("PFK", "atp_c + f6p_c -> adp_c + fdp_c + h_c", 0, 1000, "b3916 or b1723")
rx("FBP", "fdp_c + h2o_c -> f6p_c + pi_c", 0, 1000, "b3925 or b4232")
rx("FBA", "fdp_c <=> dhap_c + g3p_c", -1000, 1000, "b2097 or b2925")
rx("TPI", "dhap_c <=> g3p_c", -1000, 1000, "b3919")
rx("GAPD", "g3p_c + nad_c + pi_c <=> 13dpg_c + h_c + nadh_c", -1000, 1000, "b1779")
rx("PGK", "3pg_c + atp_c <=> 13dpg_c + adp_c", -1000, 1000, "b2926")
rx("PGM", "2pg_c <=> 3pg_c", -1000, 1000, "b3612 or b4395 or b0755")
rx("ENO", "2pg_c <=> h2o_c + pep_c", -1000, 1000, "b2779")
rx("PYK", "adp_c + h_c + pep_c -> atp_c + pyr_c", 0, 1000, "b1854 or b1676")
rx("PPS", "atp_c + h2o_c + pyr_c -> amp_c + 2 h_c + pep_c + pi_c", 0, 1000, "b1702")
rx("PDH", "coa_c + nad_c + pyr_c -> accoa_c + co2_c + nadh_c", 0, 1000,
   "b0114 and b0115 and b0116")

# --- pentose phosphate pathway ------------------------------------------
rx("G6PDH2r", "g6p_c + nadp_c <=> 6pgl_c + h_c + nadph_c", -1000, 1000, "b1852")
rx("PGL", "6pgl_c + h2o_c -> 6pgc_c + h_c", 0, 1000, "b0767")
rx("GND", "6pgc_c + nadp_c -> co2_c + nadph_c + ru5p__D_c", 0, 1000, "b2029")
rx("RPE", "ru5p__D_c <=> xu5p__D_c", -1000, 1000, "b3386 or b4301")
rx("RPI", "r5p_c <=> ru5p__D_c", -1000, 1000, "b2914 or b4090")
rx("TKT1", "r5p_c + xu5p__D_c <=> g3p_c + s7p_c", -1000, 1000, "b2935 or b2465")
rx("TALA", "g3p_c + s7p_c <=> e4p_c + f6p_c", -1000, 1000, "b2464 or b0008")
rx("TKT2", "e4p_c + xu5p__D_c <=> f6p_c + g3p_c", -1000, 1000, "b2935 or b2465")

# --- TCA cycle ------------------------------------------------------------
rx("CS", "accoa_c + h2o_c + oaa_c -> cit_c + coa_c + h_c", 0, 1000, "b0720")
rx("ACONTa", "cit_c <=> acon_C_c + h2o_c", -1000, 1000, "b0118 or b1276")
rx("ACONTb", "acon_C_c + h2o_c <=> icit_c", -1000, 1000, "b0118 or b1276")
rx("ICDHyr", "icit_c + nadp_c <=> akg_c + co2_c + nadph_c", -1000, 1000, "b1136")
rx("AKGDH", "akg_c + coa_c + nad_c -> co2_c + nadh_c + succoa_c", 0, 1000,
   "b0116 and b0726 and b0727")
rx("SUCOAS", "atp_c + coa_c + succ_c <=> adp_c + pi_c + succoa_c", -1000, 1000,
   "b0728 and b0729")
rx("SUCDi", "q8_c + succ_c -> fum_c + q8h2_c", 0, 1000,
   "b0721 and b0722 and b0723 and b0724")
rx("FRD7", "fum_c + q8h2_c -> q8_c + succ_c", 0, 1000,
   "b4151 and b4152 and b4153 and b4154")
rx("FUM", "fum_c + h2o_c <=> mal__L_c", -1000, 1000, "b1612 or b4122 or b1611")
rx("MDH", "mal__L_c + nad_c <=> h_c + nadh_c + oaa_c", -1000, 1000, "b3236")

# --- glyoxylate shunt / anaplerosis ---------------------------------------
rx("ICL", "icit_c -> glx_c + succ_c", 0, 1000, "b4015")
rx("MALS", "accoa_c + glx_c + h2o_c -> coa_c + h_c + mal__L_c", 0, 1000,
   "b4014 or b2976")
rx("PPC", "co2_c + h2o_c + pep_c -> h_c + oaa_c + pi_c", 0, 1000, "b3956")
rx("PPCK", "atp_c + oaa_c -> adp_c + co2_c + pep_c", 0, 1000, "b3403")
rx("ME1", "mal__L_c + nad_c -> co2_c + nadh_c + pyr_c", 0, 1000, "b1479")
rx("ME2", "mal__L_c + nadp_c -> co2_c + nadph_c + pyr_c", 0, 1000, "b2463")

# --- fermentation ----------------------------------------------------------
rx("LDH_D", "lac__D_c + nad_c <=> h_c + nadh_c + pyr_c", -1000, 1000,
   "b2133 or b1380")
rx("PFL", "coa_c + pyr_c -> accoa_c + for_c", 0, 1000,
   "((b0902 and b0903) and b2579) or (b0902 and b0903) or (b0902 and b3114) or (b3951 and b3952)")
rx("PTAr", "accoa_c + pi_c <=> actp_c + coa_c", -1000, 1000, "b2297 or b2458")
rx("ACKr", "ac_c + atp_c <=> actp_c + adp_c", -1000, 1000,
   "b3115 or b2296 or b1849")
rx("ACALD", "acald_c + coa_c + nad_c <=> accoa_c + h_c + nadh_c", -1000, 1000,
   "b0351 or b1241")
rx("ALCD2x", "etoh_c + nad_c <=> acald_c + h_c + nadh_c", -1000, 1000,
   "b0356 or b1478")

# --- oxidative phosphorylation / redox ------------------------------------
rx("NADH16", "4.0 h_c + nadh_c + q8_c -> 3.0 h_e + nad_c + q8h2_c", 0, 1000,
   "b2276 and b2277 and b2278 and b2279 and b2280 and b2281 and b2282 and b2283 and b2284 and b2285 and b2286 and b2287 and b2288")
rx("CYTBD", "2.0 h_c + 0.5 o2_c + q8h2_c -> h2o_c + 2.0 h_e + q8_c", 0, 1000,
   "(b0978 and b0979) or (b0733 and b0734)")
rx("ATPS4r", "adp_c + 4.0 h_e + pi_c <=> atp_c + h2o_c + 3.0 h_c", -1000, 1000,
   "((b3736 and b3737 and b3738) and (b3731 and b3732 and b3733 and b3734 and b3735)) or ((b3736 and b3737 and b3738) and (b3731 and b3732 and b3733 and b3734 and b3735) and b3739)")
rx("NADTRHD", "nad_c + nadph_c -> nadh_c + nadp_c", 0, 1000, "b3962")
rx("THD2", "2.0 h_e + nadh_c + nadp_c -> 2.0 h_c + nad_c + nadph_c", 0, 1000,
   "b1602 and b1603")
rx("ATPM", "atp_c + h2o_c -> adp_c + h_c + pi_c", 8.39, 1000, "")
rx("ADK1", "amp_c + atp_c <=> 2 adp_c", -1000, 1000, "b0474")

# --- nitrogen assimilation --------------------------------------------------
rx("GLNS", "atp_c + glu__L_c + nh4_c -> adp_c + gln__L_c + h_c + pi_c", 0, 1000,
   "b3870")
rx("GLUDy", "glu__L_c + h2o_c + nadp_c <=> akg_c + h_c + nadph_c + nh4_c",
   -1000, 1000, "b1761")
rx("GLUN", "gln__L_c + h2o_c -> glu__L_c + nh4_c", 0, 1000, "b0485 or b1524")
rx("GLUSy", "akg_c + gln__L_c + h_c + nadph_c -> 2 glu__L_c + nadp_c", 0, 1000,
   "b3212 and b3213")

# --- transport ---------------------------------------------------------------
rx("ACALDt", "acald_e <=> acald_c", -1000, 1000, "s0001")
rx("ACt2r", "ac_e + h_e <=> ac_c + h_c", -1000, 1000, "b4067")
rx("AKGt2r", "akg_e + h_e <=> akg_c + h_c", -1000, 1000, "b2587")
rx("CO2t", "co2_e <=> co2_c", -1000, 1000, "s0001")
rx("D_LACt2", "h_e + lac__D_e <=> h_c + lac__D_c", -1000, 1000, "b2975 or b3603")
rx("ETOHt2r", "etoh_e + h_e <=> etoh_c + h_c", -1000, 1000, "s0001")
rx("FORt2", "for_e + h_e -> for_c + h_c", 0, 1000, "b0904 or b2492")
rx("FORti", "for_c -> for_e", 0, 1000, "b0904 or b2492")
rx("FRUpts2", "fru_e + pep_c -> f6p_c + pyr_c", 0, 1000,
   "b1817 and b1818 and b1819 and b2415 and b2416")
rx("FUMt2_2", "fum_e + 2.0 h_e -> fum_c + 2.0 h_c", 0, 1000, "b3528")
rx("GLNabc", "atp_c + gln__L_e + h2o_c -> adp_c + gln__L_c + h_c + pi_c", 0, 1000,
   "b0811 and b0810 and b0809")
rx("GLUt2r", "glu__L_e + h_e <=> glu__L_c + h_c", -1000, 1000, "b4077")
rx("H2Ot", "h2o_e <=> h2o_c", -1000, 1000, "b0875 or s0001")
rx("MALt2_2", "2.0 h_e + mal__L_e -> 2.0 h_c + mal__L_c", 0, 1000, "b3528")
rx("NH4t", "nh4_e <=> nh4_c", -1000, 1000, "s0001 or b0451")
rx("O2t", "o2_e <=> o2_c", -1000, 1000, "s0001")
rx("PIt2r", "h_e + pi_e <=> h_c + pi_c", -1000, 1000, "b2987 or b3493")
rx("PYRt2", "h_e + pyr_e <=> h_c + pyr_c", -1000, 1000, "")
rx("SUCCt2_2", "2.0 h_e + succ_e -> 2.0 h_c + succ_c", 0, 1000, "b3528")
rx("SUCCt3", "h_e + succ_c -> h_c + succ_e", 0, 1000, "b4123 or b0621")

# --- exchanges ----------------------------------------------------------------
EXCH = {
    "EX_ac_e": 0, "EX_acald_e": 0, "EX_akg_e": 0, "EX_co2_e": -1000,
    "EX_etoh_e": 0, "EX_for_e": 0, "EX_fru_e": 0, "EX_fum_e": 0,
    "EX_glc__D_e": -10, "EX_gln__L_e": 0, "EX_glu__L_e": 0, "EX_h_e": -1000,
    "EX_h2o_e": -1000, "EX_lac__D_e": 0, "EX_mal__L_e": 0, "EX_nh4_e": -1000,
    "EX_o2_e": -1000, "EX_pi_e": -1000, "EX_pyr_e": 0, "EX_succ_e": 0,
}
for ex, lb in EXCH.items():
    met = ex[3:]
    rx(ex, f"{met} -> ", lb, 1000, "")

# --- biomass -------------------------------------------------------------------
rx("BIOMASS_Ecoli_core_w_GAM",
   "1.496 3pg_c + 3.7478 accoa_c + 59.81 atp_c + 0.361 e4p_c + 0.0709 f6p_c"
   " + 0.129 g3p_c + 0.205 g6p_c + 0.2557 gln__L_c + 4.9414 glu__L_c"
   " + 59.81 h2o_c + 3.547 nad_c + 13.0279 nadph_c + 1.7867 oaa_c"
   " + 0.5191 pep_c + 2.8328 pyr_c + 0.8977 r5p_c"
   " -> 59.81 adp_c + 4.1182 akg_c + 3.7478 coa_c + 59.81 h_c + 3.547 nadh_c"
   " + 13.0279 nadp_c + 59.81 pi_c",
   0, 1000, "")

MET_NAMES = {
    "13dpg": "3-Phospho-D-glyceroyl phosphate", "2pg": "D-Glycerate 2-phosphate",
    "3pg": "3-Phospho-D-glycerate", "6pgc": "6-Phospho-D-gluconate",
    "6pgl": "6-phospho-D-glucono-1,5-lactone", "ac": "Acetate",
    "acald": "Acetaldehyde", "accoa": "Acetyl-CoA", "acon_C": "Cis-Aconitate",
    "actp": "Acetyl phosphate", "adp": "ADP", "akg": "2-Oxoglutarate",
    "amp": "AMP", "atp": "ATP", "cit": "Citrate", "co2": "CO2",
    "coa": "Coenzyme A", "dhap": "Dihydroxyacetone phosphate",
    "e4p": "D-Erythrose 4-phosphate", "etoh": "Ethanol",
    "f6p": "D-Fructose 6-phosphate", "fdp": "D-Fructose 1,6-bisphosphate",
    "for": "Formate", "fru": "D-Fructose", "fum": "Fumarate",
    "g3p": "Glyceraldehyde 3-phosphate", "g6p": "D-Glucose 6-phosphate",
    "glc__D": "D-Glucose", "gln__L": "L-Glutamine", "glu__L": "L-Glutamate",
    "glx": "Glyoxylate", "h": "H+", "h2o": "H2O", "icit": "Isocitrate",
    "lac__D": "D-Lactate", "mal__L": "L-Malate", "nad": "NAD",
    "nadh": "NADH", "nadp": "NADP", "nadph": "NADPH", "nh4": "Ammonium",
    "o2": "O2", "oaa": "Oxaloacetate", "pep": "Phosphoenolpyruvate",
    "pi": "Phosphate", "pyr": "Pyruvate", "q8": "Ubiquinone-8",
    "q8h2": "Ubiquinol-8", "r5p": "Alpha-D-Ribose 5-phosphate",
    "ru5p__D": "D-Ribulose 5-phosphate", "s7p": "Sedoheptulose 7-phosphate",
    "succ": "Succinate", "succoa": "Succinyl-CoA",
    "xu5p__D": "D-Xylulose 5-phosphate",
    "xyl__D": "D-Xylose", "xylu__D": "D-Xylulose",
}

TERM = re.compile(r"^(?:(\d+(?:\.\d+)?)\s+)?(\S+)$")


def parse_eq(eq):
    stoich = {}
    if "<=>" in eq:
        lhs, rhs = eq.split("<=>")
    else:
        lhs, rhs = eq.split("->")
    for side, sign in ((lhs, -1.0), (rhs, 1.0)):
        side = side.strip()
        if not side:
            continue
        for term in side.split(" + "):
            m = TERM.match(term.strip())
            coef = float(m.group(1)) if m.group(1) else 1.0
            met = m.group(2)
            stoich[met] = stoich.get(met, 0.0) + sign * coef
    return stoich


def build_doc(reactions, model_id):
    mets = sorted({m for r in reactions.values() for m in parse_eq(r["eq"])})
    genes = sorted({g for r in reactions.values()
                    for g in re.findall(r"[A-Za-z]\w*", r["gpr"])
                    if g.lower() not in ("and", "or")})
    doc = {
        "metabolites": [
            {"id": m, "name": MET_NAMES.get(m.rsplit("_", 1)[0], m),
             "compartment": m.rsplit("_", 1)[1]}
            for m in mets
        ],
        "reactions": [],
        "genes": [{"id": g, "name": g} for g in genes],
        "id": model_id,
        "compartments": {"c": "cytosol", "e": "extracellular space"},
        "version": "1",
    }
    for rid in sorted(reactions):
        r = reactions[rid]
        entry = {
            "id": rid,
            "name": rid,
            "metabolites": {m: c for m, c in sorted(parse_eq(r["eq"]).items())},
            "lower_bound": float(r["lb"]),
            "upper_bound": float(r["ub"]),
            "gene_reaction_rule": r["gpr"],
        }
        if rid.startswith("BIOMASS"):
            entry["objective_coefficient"] = 1.0
        doc["reactions"].append(entry)
    return doc


def fba(doc, overrides=None, maximize="BIOMASS_Ecoli_core_w_GAM"):
    rids = [r["id"] for r in doc["reactions"]]
    mets = [m["id"] for m in doc["metabolites"]]
    midx = {m: i for i, m in enumerate(mets)}
    n, m = len(rids), len(mets)
    S = np.zeros((m, n))
    lb = np.zeros(n)
    ub = np.zeros(n)
    for j, r in enumerate(doc["reactions"]):
        for met, c in r["metabolites"].items():
            S[midx[met], j] = c
        lb[j], ub[j] = r["lower_bound"], r["upper_bound"]
    if overrides:
        for rid, (lo, hi) in overrides.items():
            j = rids.index(rid)
            if lo is not None:
                lb[j] = lo
            if hi is not None:
                ub[j] = hi
    c = np.zeros(n)
    c[rids.index(maximize)] = -1.0
    res = linprog(c, A_eq=S, b_eq=np.zeros(m), bounds=list(zip(lb, ub)),
                  method="highs")
    return res, rids


core = build_doc(R, "e_coli_core")

# xylose-extended variant
RX = dict(R)


def rx2(rid, eq, lb, ub, gpr=""):
    RX[rid] = {"eq": eq, "lb": lb, "ub": ub, "gpr": gpr}


rx2("EX_xyl__D_e", "xyl__D_e -> ", 0, 1000, "")
# nitrogen-lean minimal medium: growth on saturating glucose is ammonium-
# capped, so a marginal xylose allowance has zero objective value and the
# uptake tie-break keeps xylose untouched until glucose runs out
RX["EX_nh4_e"] = dict(RX["EX_nh4_e"], lb=-1.75)
rx2("XYLabc", "atp_c + h2o_c + xyl__D_e -> adp_c + h_c + pi_c + xyl__D_c",
    0, 1000, "b3566 and b3567 and b3568")
rx2("XYLI1", "xyl__D_c <=> xylu__D_c", -1000, 1000, "b3565")
rx2("XYLK", "atp_c + xylu__D_c -> adp_c + h_c + xu5p__D_c", 0, 1000, "b3564")

xyl = build_doc(RX, "e_coli_core_xyl")

with open("fixtures/e_coli_core.json", "w") as f:
    json.dump(core, f, indent=1)
    f.write("\n")
with open("fixtures/e_coli_core_xyl.json", "w") as f:
    json.dump(xyl, f, indent=1)
    f.write("\n")

print("core:", len(core["reactions"]), "reactions,",
      len(core["metabolites"]), "metabolites,", len(core["genes"]), "genes")
print("xyl: ", len(xyl["reactions"]), "reactions,",
      len(xyl["metabolites"]), "metabolites,", len(xyl["genes"]), "genes")

res, _ = fba(core)
print("core aerobic glc=10            mu = %.12f" % -res.fun)
res, _ = fba(core, {"EX_o2_e": (0, None)})
print("core anaerobic glc=10          mu = %.12f" % -res.fun)
res, _ = fba(core, {"EX_o2_e": (-5.0, None)})
print("core glc=10 o2<=5              mu = %.12f" % -res.fun)
res, _ = fba(xyl, {"EX_o2_e": (-5.0, None)})
print("xyl  glc=10 o2<=5 (no xylose)  mu = %.12f" % -res.fun)
res, _ = fba(xyl, {"EX_o2_e": (-5.0, None), "EX_glc__D_e": (0, None),
                   "EX_xyl__D_e": (-9.0, None)})
print("xyl  xyl=9 o2<=5 (no glucose)  mu = %.12f" % -res.fun)
