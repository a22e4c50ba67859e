def execute_command(image):
    image_patch = ImagePatch(image)
    monitors = image_patch.find('monitor')
    if len(monitors) == 0:
        return {'function': 'None', 'error': 'No monitor found.'}
    monitors.sort(key=lambda m: m.width * m.height)
    monitor = monitors[-1]
    return {'function': 'navigate_to_object', 'inputs': (monitor.horizontal_center, monitor.vertical_center), 'box': [monitor.left, monitor.lower, monitor.right, monitor.upper]}
