# Generated by Django 6.0.1 on 2026-10-18 10:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='DiagramRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=100, unique=True)),
                ('lagjson', models.TextField(help_text='Canonical LagJSON text')),
                ('crossing_count', models.PositiveIntegerField(default=0)),
                ('component_count', models.PositiveIntegerField(default=0)),
                ('convention', models.CharField(default='lie-group', max_length=20)),
                ('dga_rendering', models.TextField(blank=True, help_text='One line per generator: d a = ...')),
                ('d_squared_ok', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['name'],
            },
        ),
        migrations.CreateModel(
            name='Certificate',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('diagram_name', models.CharField(max_length=100)),
                ('sublink', models.CharField(help_text='Comma-separated component indices', max_length=100)),
                ('rank', models.PositiveIntegerField(default=1)),
                ('complete', models.BooleanField(default=True, help_text='False when found by a bounded search')),
                ('verdict', models.CharField(choices=[('not_flexible', 'Not flexible'), ('no_conclusion', 'No conclusion')], default='no_conclusion', max_length=20)),
                ('certificate_json', models.TextField(blank=True)),
                ('transcript_sha256', models.CharField(blank=True, max_length=64)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('diagram', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='certificates', to='lch_app.diagramrecord')),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
