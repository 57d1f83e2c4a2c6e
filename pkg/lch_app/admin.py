# lch_app/admin.py
from django.contrib import admin
from .models import Certificate, DiagramRecord


class DiagramRecordAdmin(admin.ModelAdmin):
    """
    Custom admin interface for stored diagrams
    """
    list_display = ('name', 'crossing_count', 'component_count', 'convention', 'd_squared_ok', 'updated_at')
    list_filter = ('d_squared_ok', 'convention')
    search_fields = ('name', 'dga_rendering')
    readonly_fields = ('created_at', 'updated_at')
    fieldsets = (
        ('Diagram', {
            'fields': ('name', 'lagjson', 'crossing_count', 'component_count')
        }),
        ('DGA', {
            'fields': ('convention', 'dga_rendering', 'd_squared_ok')
        }),
        ('Metadata', {
            'fields': ('created_at', 'updated_at'),
            'classes': ('collapse',)
        }),
    )


class CertificateAdmin(admin.ModelAdmin):
    list_display = ('diagram_name', 'sublink', 'rank', 'complete', 'verdict', 'created_at')
    list_filter = ('verdict', 'complete', 'rank')
    search_fields = ('diagram_name', 'transcript_sha256')
    readonly_fields = ('created_at', 'transcript_sha256')


# Register models with custom admin classes
admin.site.register(DiagramRecord, DiagramRecordAdmin)
admin.site.register(Certificate, CertificateAdmin)

# Customize admin site header
admin.site.site_header = "LCH Toolkit Admin"
admin.site.site_title = "LCH Admin Portal"
admin.site.index_title = "Stored diagrams and certificates"
