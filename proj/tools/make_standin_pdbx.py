#!/usr/bin/env python3
"""Generate synthetic PDBx/XML stand-ins for the end-to-end fixtures.

The files mimic the PDBML layout served by files.rcsb.org (namespaced
atom_site records, xsi:nil placeholders, HETATM waters and ligands,
alternate locations, insertion codes, non-standard residues) but the
coordinates are a generated backbone trace, not experimental data. Use
tools/fetch_pdbx.sh to obtain the real entries when network access exists.

Output is deterministic: python3 tools/make_standin_pdbx.py tests/data/standin
"""

import gzip
import math
import random
import sys
from pathlib import Path

STANDARD = ["ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
            "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"]

FIELDS = ["B_iso_or_equiv", "Cartn_x", "Cartn_y", "Cartn_z", "auth_asym_id", "auth_atom_id",
          "auth_comp_id", "auth_seq_id", "group_PDB", "label_alt_id", "label_asym_id",
          "label_atom_id", "label_comp_id", "label_entity_id", "label_seq_id", "occupancy",
          "pdbx_PDB_ins_code", "pdbx_PDB_model_num", "type_symbol"]

# entry -> (gzip?, chains as (chain id, residue count), options)
ENTRIES = {
    "5AFR": (True, [("A", 320)], {"altlocs": 2, "waters": 40, "ligand": "SO4"}),
    "5AGU": (True, [("A", 240), ("B", 240)], {"mse": 3, "insertion": True, "waters": 25}),
    "6ABO": (True, [("A", 110), ("B", 110), ("C", 60), ("D", 60)], {"no_ca": 1, "waters": 12}),
    "6AGX": (False, [("A", 290)], {"ligand": "ATP", "altlocs": 1, "waters": 30}),
}


def unit(v):
    n = math.sqrt(sum(c * c for c in v))
    return [c / n for c in v]


def ca_trace(rng, count, origin):
    """CA positions 3.8 A apart, alternating helical and extended stretches."""
    pts = [list(origin)]
    direction = unit([rng.uniform(-1, 1) for _ in range(3)])
    while len(pts) < count:
        helix = rng.random() < 0.55
        length = rng.randint(6, 18)
        perp = unit([direction[1] - direction[2], direction[2] - direction[0],
                     direction[0] - direction[1]] if any(direction) else [1, 0, 0])
        other = [direction[1] * perp[2] - direction[2] * perp[1],
                 direction[2] * perp[0] - direction[0] * perp[2],
                 direction[0] * perp[1] - direction[1] * perp[0]]
        start = pts[-1]
        for k in range(1, length + 1):
            if len(pts) >= count:
                break
            if helix:
                angle = math.radians(100.0 * k)
                p = [start[i] + direction[i] * 1.5 * k
                     + 2.3 * (math.cos(angle) - 1.0) * perp[i]
                     + 2.3 * math.sin(angle) * other[i] for i in range(3)]
            else:
                zig = 0.9 if k % 2 else -0.9
                p = [start[i] + direction[i] * 3.3 * k + zig * perp[i] for i in range(3)]
            pts.append(p)
        # Drift back towards the origin so the fold stays globular.
        turn = [rng.uniform(-1, 1) for _ in range(3)]
        home = unit([origin[i] - pts[-1][i] + 1e-6 for i in range(3)])
        direction = unit([direction[i] + 1.2 * turn[i] + 0.9 * home[i] for i in range(3)])
    return pts[:count]


class Writer:
    def __init__(self, entry):
        self.entry = entry
        self.lines = []
        self.serial = 0

    def atom(self, group, comp, atom, chain, seq, x, y, z, entity, label_seq=True,
             alt=None, occ=1.0, ins=None, model=1, element=None):
        self.serial += 1
        values = {
            "B_iso_or_equiv": "%.2f" % (20.0 + (self.serial * 7 % 300) / 10.0),
            "Cartn_x": "%.3f" % x, "Cartn_y": "%.3f" % y, "Cartn_z": "%.3f" % z,
            "auth_asym_id": chain, "auth_atom_id": atom, "auth_comp_id": comp,
            "auth_seq_id": str(seq), "group_PDB": group, "label_alt_id": alt,
            "label_asym_id": chain, "label_atom_id": atom, "label_comp_id": comp,
            "label_entity_id": str(entity), "label_seq_id": str(seq) if label_seq else None,
            "occupancy": "%.2f" % occ, "pdbx_PDB_ins_code": ins,
            "pdbx_PDB_model_num": str(model), "type_symbol": element or atom[0],
        }
        self.lines.append('      <PDBx:atom_site id="%d">' % self.serial)
        for f in FIELDS:
            v = values[f]
            if v is None:
                self.lines.append('         <PDBx:%s xsi:nil="true" />' % f)
            else:
                self.lines.append("         <PDBx:%s>%s</PDBx:%s>" % (f, v, f))
        self.lines.append("      </PDBx:atom_site>")

    def document(self):
        head = [
            '<?xml version="1.0" encoding="UTF-8" ?>',
            "<!-- Synthetic stand-in for %s generated by tools/make_standin_pdbx.py."
            " Coordinates are not experimental. -->" % self.entry,
            '<PDBx:datablock datablockName="%s"' % self.entry,
            '   xmlns:PDBx="http://pdbml.pdb.org/schema/pdbx-v50.xsd"',
            '   xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance">',
            "   <PDBx:atom_siteCategory>",
        ]
        tail = ["   </PDBx:atom_siteCategory>", "</PDBx:datablock>", ""]
        return "\n".join(head + self.lines + tail)


def residue_atoms(w, rng, comp, chain, seq, ca, prev, nxt, entity, alt=None, occ=1.0,
                  ins=None, with_ca=True, group="ATOM"):
    back = unit([prev[i] - ca[i] for i in range(3)]) if prev else [-1.0, 0.0, 0.0]
    fwd = unit([nxt[i] - ca[i] for i in range(3)]) if nxt else [1.0, 0.0, 0.0]
    side = unit([back[1] * fwd[2] - back[2] * fwd[1] + 1e-3,
                 back[2] * fwd[0] - back[0] * fwd[2],
                 back[0] * fwd[1] - back[1] * fwd[0]])
    atoms = [("N", [ca[i] + 1.46 * back[i] for i in range(3)])]
    if with_ca:
        atoms.append(("CA", ca))
    c = [ca[i] + 1.52 * fwd[i] for i in range(3)]
    atoms.append(("C", c))
    atoms.append(("O", [c[i] + 1.23 * side[i] for i in range(3)]))
    if comp != "GLY":
        atoms.append(("CB", [ca[i] - 1.53 * side[i] for i in range(3)]))
    element = {"MSE": {"SE": "SE"}}.get(comp, {})
    if comp == "MSE":
        atoms.append(("SE", [ca[i] - 3.9 * side[i] for i in range(3)]))
    for name, p in atoms:
        jitter = [rng.uniform(-0.05, 0.05) for _ in range(3)]
        w.atom(group, comp, name, chain, seq, *(p[i] + jitter[i] for i in range(3)),
               entity=entity, alt=alt, occ=occ, ins=ins, element=element.get(name))


def generate(entry):
    gz, chains, opts = ENTRIES[entry]
    rng = random.Random(entry)
    w = Writer(entry)
    lows = []
    for entity, (chain, count) in enumerate(chains, start=1):
        origin = [rng.uniform(-15, 15), rng.uniform(-15, 15), rng.uniform(-15, 15)]
        trace = ca_trace(rng, count, origin)
        lows.append(trace)
        seqs = [rng.choice(STANDARD) for _ in range(count)]
        mse_at = set(rng.sample(range(5, count - 5), opts.get("mse", 0)))
        alt_at = set(rng.sample(range(5, count - 5), opts.get("altlocs", 0)))
        no_ca_at = set(rng.sample(range(5, count - 5), opts.get("no_ca", 0)))
        ins_at = count // 2 if opts.get("insertion") and chain == "A" else None
        for i, ca in enumerate(trace):
            seq = i + 1
            prev = trace[i - 1] if i else None
            nxt = trace[i + 1] if i + 1 < count else None
            comp = "MSE" if i in mse_at else seqs[i]
            group = "HETATM" if comp == "MSE" else "ATOM"
            if i in alt_at:
                shifted = [ca[k] + (0.6 if k == 0 else 0.0) for k in range(3)]
                residue_atoms(w, rng, comp, chain, seq, ca, prev, nxt, entity, alt="A", occ=0.6)
                residue_atoms(w, rng, comp, chain, seq, shifted, prev, nxt, entity, alt="B", occ=0.4)
            else:
                residue_atoms(w, rng, comp, chain, seq, ca, prev, nxt, entity,
                              with_ca=i not in no_ca_at, group=group)
            if ins_at is not None and i == ins_at:
                extra = [ca[k] + (1.9 if k == 1 else 0.0) for k in range(3)]
                residue_atoms(w, rng, rng.choice(STANDARD), chain, seq, extra, ca, nxt,
                              entity, ins="A")
    entity = len(chains) + 1
    every = [p for t in lows for p in t]
    if "ligand" in opts:
        anchor = rng.choice(every)
        for k, name in enumerate(["P", "O1", "O2", "O3", "O4"]):
            w.atom("HETATM", opts["ligand"], name, "A", 901,
                   anchor[0] + 4.0 + 0.8 * k, anchor[1] + 4.0, anchor[2], entity,
                   label_seq=False)
        entity += 1
    for k in range(opts.get("waters", 0)):
        anchor = rng.choice(every)
        w.atom("HETATM", "HOH", "O", "A", 1001 + k, anchor[0] + rng.uniform(3, 6),
               anchor[1] + rng.uniform(3, 6), anchor[2] + rng.uniform(3, 6), entity,
               label_seq=False)
    return gz, w.document()


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data/standin")
    out.mkdir(parents=True, exist_ok=True)
    for entry in ENTRIES:
        gz, text = generate(entry)
        data = text.encode("utf-8")
        if gz:
            path = out / (entry + ".xml.gz")
            path.write_bytes(gzip.compress(data, compresslevel=9, mtime=0))
        else:
            path = out / (entry + ".xml")
            path.write_bytes(data)
        print(path)


if __name__ == "__main__":
    main()
