# lch_app/models.py
import json

from django.db import models


class DiagramRecord(models.Model):
    """
    A named LagJSON diagram together with the canonical rendering of its DGA.
    Written by ``manage.py dga --save``.
    """
    name = models.CharField(max_length=100, unique=True)
    lagjson = models.TextField(help_text="Canonical LagJSON text")
    crossing_count = models.PositiveIntegerField(default=0)
    component_count = models.PositiveIntegerField(default=0)
    convention = models.CharField(max_length=20, default='lie-group')
    dga_rendering = models.TextField(blank=True, help_text="One line per generator: d a = ...")
    d_squared_ok = models.BooleanField(default=False)

    # Metadata
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ['name']

    def __str__(self):
        return f"{self.name} ({self.crossing_count} crossings)"

    def get_rendering_lines(self):
        """Returns the DGA rendering as a list of lines"""
        return [line for line in self.dga_rendering.splitlines() if line]


class Certificate(models.Model):
    """
    An emitted symplectic homology certificate for a sublink of a diagram.
    Written by ``manage.py sh_cert --save``.
    """
    VERDICT_CHOICES = [
        ('not_flexible', 'Not flexible'),
        ('no_conclusion', 'No conclusion'),
    ]

    diagram_name = models.CharField(max_length=100)
    diagram = models.ForeignKey(
        DiagramRecord,
        on_delete=models.SET_NULL,
        null=True,
        blank=True,
        related_name='certificates'
    )
    sublink = models.CharField(max_length=100, help_text="Comma-separated component indices")
    rank = models.PositiveIntegerField(default=1)
    complete = models.BooleanField(default=True, help_text="False when found by a bounded search")
    verdict = models.CharField(max_length=20, choices=VERDICT_CHOICES, default='no_conclusion')
    certificate_json = models.TextField(blank=True)
    transcript_sha256 = models.CharField(max_length=64, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.diagram_name} [{self.sublink}] rank {self.rank}: {self.get_verdict_display()}"

    def get_sublink_list(self):
        """Returns the sublink as a list of component indices"""
        if self.sublink:
            return [int(part) for part in self.sublink.split(',') if part.strip()]
        return []

    def get_certificate(self):
        """Parsed certificate JSON, or None when no certificate was found"""
        if self.certificate_json:
            return json.loads(self.certificate_json)
        return None
