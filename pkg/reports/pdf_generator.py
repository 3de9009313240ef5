# reports/pdf_generator.py
import io
from datetime import datetime

import streamlit as st
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from utils.helpers import format_sig


def generate_pdf(run_name, report, generated=None):
    """One-page run summary: the report.csv metrics as a table."""
    buffer = io.BytesIO()
    doc = SimpleDocTemplate(buffer, pagesize=A4, rightMargin=30, leftMargin=30, topMargin=30, bottomMargin=18)
    styles = getSampleStyleSheet()
    elements = []

    elements.append(Paragraph(f"Tracking Report: {run_name}", styles['Title']))
    elements.append(Spacer(1, 10))
    rows = [["Metric", "Value"]]
    for key, value in report.items():
        rows.append([key, format_sig(value) if not key.startswith("saturation_") else (value or "none")])
    table = Table(rows)
    table.setStyle(TableStyle([
        ('BACKGROUND', (0, 0), (-1, 0), colors.grey),
        ('GRID', (0, 0), (-1, -1), 1, colors.black)
    ]))
    elements.append(table)
    elements.append(Spacer(1, 10))

    stamp = (generated or datetime.now()).strftime("%Y-%m-%d %H:%M:%S")
    elements.append(Paragraph(f"Report generated: {stamp}", styles['Normal']))
    doc.build(elements)
    buffer.seek(0)
    return buffer


def pdf_download_button(run):
    if st.button("Generate PDF Report"):
        pdf_buffer = generate_pdf(run.name, run.report)
        st.download_button(label="Download PDF", data=pdf_buffer, file_name=f"{run.name}_report.pdf", mime="application/pdf")
