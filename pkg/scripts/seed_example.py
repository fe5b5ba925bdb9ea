"""
Siembra los ejemplos de referencia como archivos listos para `incmeter analyze`:

  loan.rules / loan.jsonl   solicitud de préstamo (un único caso inconsistente)
  m1.rules   / m1.jsonl     cuatro casos sobre cinco reglas compartidas

Uso: python scripts/seed_example.py [directorio]   (por defecto ./data)
"""
import json
import os
import sys
from pathlib import Path

# Asegurar que el directorio raíz está en el path para importar app
sys.path.append(os.getcwd())

from app.schemas.cases import CaseRecord
from app.services.parser import parse_rules, render_rules, write_cases

EXAMPLES = {
    "loan": {
        "rules": [
            "platinumCustomer -> creditWorthy.",
            "mentalCondition -> -creditWorthy.",
        ],
        "cases": [
            {"case_id": "applicant1", "facts": ["mentalCondition", "platinumCustomer"]},
        ],
    },
    "m1": {
        "rules": [
            "a -> b.",
            "c -> -b.",
            "b -> x.",
            "x -> z.",
            "y -> -z.",
        ],
        "cases": [
            {"case_id": "b1", "facts": ["a", "c"]},
            {"case_id": "b2", "facts": ["a", "c"]},
            {"case_id": "b3", "facts": ["a", "y"]},
            {"case_id": "b4", "facts": ["a", "c", "y"]},
        ],
    },
}


def seed(target: Path) -> None:
    target.mkdir(parents=True, exist_ok=True)
    print(f"🌱 Sembrando ejemplos en {target}/ ...")
    for name, example in EXAMPLES.items():
        # Se valida a través del parser para no escribir nunca un archivo ilegible.
        program = parse_rules("\n".join(example["rules"]))
        (target / f"{name}.rules").write_text(render_rules(program), encoding="utf-8")

        records = [CaseRecord.model_validate(case) for case in example["cases"]]
        with open(target / f"{name}.jsonl", "w", encoding="utf-8") as stream:
            count = write_cases(records, stream)
        print(f"   ✅ {name}: {len(program)} reglas, {count} casos")

    print("✨ Listo. Prueba:")
    print(f"   incmeter analyze --rules {target}/m1.rules --cases {target}/m1.jsonl")
    print(json.dumps({"ejemplos": sorted(EXAMPLES)}, ensure_ascii=False))


if __name__ == "__main__":
    seed(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data"))
