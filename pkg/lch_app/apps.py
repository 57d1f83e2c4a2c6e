from django.apps import AppConfig


class LchAppConfig(AppConfig):
    name = 'lch_app'
    verbose_name = 'Legendrian contact homology'
