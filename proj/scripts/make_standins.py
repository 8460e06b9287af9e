"""Generate seeded synthetic stand-ins for the loan and heart datasets.

The column layout, value domains and row counts follow the public Kaggle
loan-prediction and UCI Cleveland heart-disease tables. Labels come from a
hand-written logistic model plus label noise, so the files exercise the
same code paths as the real data without pretending to be it.

    python scripts/make_standins.py [--out data] [--seed 7]
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np


def logistic(z):
    return 1.0 / (1.0 + np.exp(-z))


def loan(rng, n=614):
    gender = rng.choice(["Male", "Female"], n, p=[0.81, 0.19])
    married = rng.choice(["Yes", "No"], n, p=[0.65, 0.35])
    dependents = rng.choice(["0", "1", "2", "3+"], n, p=[0.57, 0.17, 0.17, 0.09])
    education = rng.choice(["Graduate", "Not Graduate"], n, p=[0.78, 0.22])
    self_employed = rng.choice(["No", "Yes"], n, p=[0.86, 0.14])
    income = np.clip(np.round(rng.lognormal(8.3, 0.6, n)), 150, 81000)
    co_income = np.where(rng.random(n) < 0.45, 0.0, np.round(rng.lognormal(7.3, 0.7, n)))
    co_income = np.clip(co_income, 0, 41667)
    amount = np.round(20 + 0.018 * (income + co_income) + rng.normal(0, 35, n))
    amount = np.clip(amount, 9, 700)
    term = rng.choice([360, 180, 480, 300, 240, 120, 84, 60, 36, 12], n,
                      p=[0.85, 0.07, 0.025, 0.02, 0.01, 0.01, 0.005, 0.004, 0.003, 0.003])
    credit = rng.choice(["1", "0"], n, p=[0.85, 0.15])
    area = rng.choice(["Semiurban", "Urban", "Rural"], n, p=[0.38, 0.33, 0.29])

    burden = amount * 1000.0 / (income + co_income) / term * 12
    z = (-1.6 + 3.6 * (credit == "1") + 0.7 * (area == "Semiurban") - 0.3 * (area == "Rural")
         + 0.4 * (married == "Yes") + 0.25 * (education == "Graduate")
         - 1.1 * np.clip(burden - 0.35, 0, None))
    y = rng.random(n) < logistic(z)
    flip = rng.random(n) < 0.04
    y = np.where(flip, ~y, y)
    rows = [[gender[i], married[i], dependents[i], education[i], self_employed[i],
             int(income[i]), int(co_income[i]), int(amount[i]), int(term[i]), credit[i],
             area[i], "Y" if y[i] else "N"] for i in range(n)]
    schema = {
        "features": [
            {"name": "Gender", "type": "categorical", "values": ["Male", "Female"]},
            {"name": "Married", "type": "categorical", "values": ["Yes", "No"]},
            {"name": "Dependents", "type": "categorical", "values": ["0", "1", "2", "3+"]},
            {"name": "Education", "type": "categorical", "values": ["Graduate", "Not Graduate"]},
            {"name": "Self_Employed", "type": "categorical", "values": ["No", "Yes"]},
            {"name": "ApplicantIncome", "type": "numeric", "min": 150, "max": 81000},
            {"name": "CoapplicantIncome", "type": "numeric", "min": 0, "max": 41667},
            {"name": "LoanAmount", "type": "numeric", "min": 9, "max": 700},
            {"name": "Loan_Amount_Term", "type": "numeric", "min": 12, "max": 480},
            {"name": "Credit_History", "type": "categorical", "values": ["1", "0"]},
            {"name": "Property_Area", "type": "categorical", "values": ["Semiurban", "Urban", "Rural"]},
        ],
        "class": {"name": "Loan_Status", "labels": ["Y", "N"]},
    }
    return schema, rows


def heart(rng, n=303):
    age = np.clip(np.round(rng.normal(54.4, 9.0, n)), 29, 77)
    sex = rng.choice(["male", "female"], n, p=[0.68, 0.32])
    cp = rng.choice(["typical", "atypical", "non-anginal", "asymptomatic"], n,
                    p=[0.08, 0.16, 0.28, 0.48])
    trestbps = np.clip(np.round(rng.normal(131.7, 17.6, n)), 94, 200)
    chol = np.clip(np.round(rng.normal(246.7, 51.8, n)), 126, 564)
    fbs = rng.choice(["false", "true"], n, p=[0.85, 0.15])
    restecg = rng.choice(["normal", "st-t", "lvh"], n, p=[0.50, 0.01, 0.49])
    thalach = np.clip(np.round(rng.normal(175 - 0.5 * age, 18, n)), 71, 202)
    exang = rng.choice(["no", "yes"], n, p=[0.67, 0.33])
    oldpeak = np.clip(np.round(rng.gamma(1.1, 0.95, n), 1), 0, 6.2)
    slope = rng.choice(["up", "flat", "down"], n, p=[0.47, 0.46, 0.07])
    ca = rng.choice([0, 1, 2, 3], n, p=[0.59, 0.22, 0.12, 0.07])
    thal = rng.choice(["normal", "fixed", "reversable"], n, p=[0.55, 0.06, 0.39])

    z = 1.8 * (-3.5 + 1.9 * (cp == "asymptomatic") + 1.6 * (thal == "reversable")
               + 0.9 * ca + 0.6 * oldpeak - 0.025 * (thalach - 150) + 0.8 * (exang == "yes")
               + 0.6 * (sex == "male") + 0.5 * (slope == "flat"))
    y = rng.random(n) < logistic(z)
    flip = rng.random(n) < 0.03
    y = np.where(flip, ~y, y)
    rows = [[int(age[i]), sex[i], cp[i], int(trestbps[i]), int(chol[i]), fbs[i], restecg[i],
             int(thalach[i]), exang[i], f"{oldpeak[i]:.1f}", slope[i], int(ca[i]), thal[i],
             "presence" if y[i] else "absence"] for i in range(n)]
    schema = {
        "features": [
            {"name": "age", "type": "numeric", "min": 29, "max": 77},
            {"name": "sex", "type": "categorical", "values": ["male", "female"]},
            {"name": "cp", "type": "categorical",
             "values": ["typical", "atypical", "non-anginal", "asymptomatic"]},
            {"name": "trestbps", "type": "numeric", "min": 94, "max": 200},
            {"name": "chol", "type": "numeric", "min": 126, "max": 564},
            {"name": "fbs", "type": "categorical", "values": ["false", "true"]},
            {"name": "restecg", "type": "categorical", "values": ["normal", "st-t", "lvh"]},
            {"name": "thalach", "type": "numeric", "min": 71, "max": 202},
            {"name": "exang", "type": "categorical", "values": ["no", "yes"]},
            {"name": "oldpeak", "type": "numeric", "min": 0, "max": 6.2},
            {"name": "slope", "type": "categorical", "values": ["up", "flat", "down"]},
            {"name": "ca", "type": "numeric", "min": 0, "max": 3},
            {"name": "thal", "type": "categorical", "values": ["normal", "fixed", "reversable"]},
        ],
        "class": {"name": "num", "labels": ["absence", "presence"]},
    }
    return schema, rows


def write(out, name, schema, rows):
    d = out / name
    d.mkdir(parents=True, exist_ok=True)
    (d / "schema.json").write_text(json.dumps(schema, indent=1) + "\n")
    with open(d / f"{name}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f["name"] for f in schema["features"]] + [schema["class"]["name"]])
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    write(args.out, "loan", *loan(rng))
    write(args.out, "heart", *heart(rng))


if __name__ == "__main__":
    main()
