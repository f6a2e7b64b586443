"""Reference distilled policies for the built-in environments, coefficients to 4 digits."""
import numpy as np

from voronoi_distill.utils.constants import EnvName

# (codeword, formula per action component)
SIMPLEGOAL_TABLE = [
    ([0.891, 0.628], ("-0.148x-0.021y-0.055", "-0.420x+0.231y-1.095")),
    ([0.826, 0.460], ("-0.347x+0.305y-0.212", "-1.087x-1.370y-0.319")),
    ([0.407, 0.150], ("3.175y-1.000", "-4.127y-0.710")),
    ([0.181, 0.326], ("-4.588x+0.045y-0.620", "3.134x-0.082y-0.978")),
    ([0.425, 0.568], ("-1.267x+0.966y-0.056", "-0.281x-0.967y-0.702")),
    ([0.292, 0.765], ("-1.657x-0.271y+0.147", "0.433x-0.602y-0.484")),
    ([0.154, 0.051], ("-5.328x+5.256y+0.191", "-2.583x-4.501y-0.461")),
    ([0.545, 0.817], ("-0.124x-0.035y-0.964", "0.082x-1.027y+0.226")),
    ([0.842, 0.153], ("-0.628x+0.406y-0.385", "-0.536x-0.010y+0.663")),
    ([0.034, 0.496], ("-0.649x-0.652y-0.076", "0.706x-0.6946y-0.463")),
    ([0.583, 0.303], ("-0.290x-0.470y-0.855", "0.103x-3.580y+0.991")),
    ([0.824, 0.969], ("0.266x-0.424y-0.684", "-0.598x-0.256y-0.420")),
    ([0.195, 0.970], ("0.327x-0.246y+0.349", "0.620x-0.077y-0.882")),
]

MOUNTAINCAR_TABLE = [
    ([-0.592, 0.000], ("-0.375x+3.004v-1.205",)),
    ([-0.463, 0.000], ("1.664x+2.371v-0.211",)),
    ([-0.510, 0.040], ("-1.117x+1.050v+0.340",)),
    ([-0.568, 0.038], ("-0.707x+0.454v+0.585",)),
    ([-0.575, -0.024], ("0.8357x+0.7049v-0.514",)),
    ([-0.154, 0.045], ("-0.952x+1.840v+0.470",)),
    ([-0.655, -0.014], ("-0.007x+0.840v-0.992",)),
    ([-0.424, 0.041], ("-1.270x+1.317v+0.417",)),
    ([-0.298, 0.042], ("-0.840x+1.083v+0.701",)),
    ([-0.256, 0.042], ("-0.216x+0.673v+0.916",)),
    ([-0.135, 0.043], ("-0.97x-0.264v+0.888",)),
    ([-0.018, 0.041], ("-0.435x+0.738v+0.965",)),
    ([-0.711, -0.020], ("0.867x+0.415v-0.374",)),
    ([-0.481, -0.015], ("1.125x+0.788v-0.440",)),
    ([-0.854, -0.003], ("-1.006x+0.301v+0.150",)),
    ([-0.060, 0.043], ("-1.115x+1.334v+0.867",)),
    ([-0.788, -0.018], ("-0.416x-0.778v+0.390",)),
    ([-0.815, -0.012], ("-0.569x+0.090v+0.535",)),
    ([-0.778, 0.016], ("-0.774x+1.08v+0.376",)),
    ([-0.347, 0.044], ("-1.147x+0.772v+0.521",)),
    ([0.030, 0.039], ("1.199x+0.872v+0.734",)),
    ([-0.752, -0.011], ("0.871x-0.737v+0.018",)),
    ([-0.604, 0.030], ("-0.281x+0.511v+0.811",)),
    ([-0.194, 0.038], ("-1.299x+0.470v+0.705",)),
    ([0.054, 0.033], ("0.007x+0.701v+0.974",)),
    ([-0.412, 0.000], ("1.0258x+0.073v-0.464",)),
    ([-0.601, -0.024], ("0.7532x+1.528v-0.514",)),
    ([-0.701, 0.030], ("-0.801x+0.917v+0.412",)),
    ([-0.651, 0.033], ("-0.350x-0.09v+0.7741",)),
    ([-0.759, 0.018], ("-0.799x+0.284v+0.395",)),
    ([-0.534, -0.020], ("0.668x+0.130v-0.641",)),
    ([-0.465, 0.039], ("-0.155x+0.835v+0.602",)),
]

TABLES = {
    EnvName.SIMPLEGOAL: SIMPLEGOAL_TABLE,
    EnvName.MOUNTAINCAR: MOUNTAINCAR_TABLE,
}


def reference_policy(name: str):
    """The reference policy for environment ``name`` as a DistilledPolicy."""
    from voronoi_distill.distiller.distiller import DistilledPolicy
    from voronoi_distill.envs import env_name, make_env
    from voronoi_distill.partition import VoronoiPartition
    from voronoi_distill.policies.formula import parse_formula
    from voronoi_distill.policies.linear import LinearPolicy

    key = env_name(name)
    spec = make_env(key.value).spec
    table = TABLES[key]
    subpolicies = []
    for _, formulas in table:
        rows = [parse_formula(text, spec.state_labels) for text in formulas]
        subpolicies.append(LinearPolicy(np.array([w for w, _ in rows]), np.array([b for _, b in rows])))
    partition = VoronoiPartition(spec.state_dim, [codeword for codeword, _ in table])
    return DistilledPolicy(partition, subpolicies, spec.action_low, spec.action_high)
